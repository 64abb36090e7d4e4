#pragma once

// The pair-counting function nu(t) = #{(x, y) in E x E : phi(x, y) = t},
// computed by brute force and through the Fourier expansion of R_t, plus the
// lower-bound expressions that make nu(t) > 0 checkable.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "ffphi/cyclotomic.hpp"
#include "ffphi/field.hpp"
#include "ffphi/fourier.hpp"
#include "ffphi/varieties.hpp"

namespace ffphi {

/// Largest |E|^2 the brute-force pair loops accept by default.
inline constexpr std::uint64_t kDefaultPairBudget = std::uint64_t{1} << 32;

enum class NuSource { brute, fourier };

inline const char* to_string(NuSource s) { return s == NuSource::brute ? "brute" : "fourier"; }

/// nu(t) for every t in F_q. The Fourier route leaves t = 0 unset.
struct NuProfile {
  NuSource source = NuSource::brute;
  std::size_t set_size = 0;
  std::vector<std::optional<std::uint64_t>> counts;

  /// min over t != 0 of nu(t).
  std::uint64_t min_nonzero() const {
    std::uint64_t m = std::numeric_limits<std::uint64_t>::max();
    for (std::size_t t = 1; t < counts.size(); ++t) m = std::min(m, counts[t].value());
    return m;
  }
  bool covers_all_nonzero() const { return min_nonzero() > 0; }
};

namespace detail {

inline void require_phi_space(const PointSet& E) { require_even(E.dim()); }

inline void require_pairs(const PointSet& E, std::uint64_t budget) {
  const auto n = static_cast<std::uint64_t>(E.size());
  if (n * n > budget)
    throw BudgetExceeded("|E|^2 = " + std::to_string(n * n) + " pairs exceeds the budget of " + std::to_string(budget));
}

}  // namespace detail

/// All of nu(0), ..., nu(q-1) by a single pass over E x E.
inline NuProfile nu_brute_profile(const PointSet& E, std::uint64_t pair_budget = kDefaultPairBudget) {
  detail::require_phi_space(E);
  detail::require_pairs(E, pair_budget);
  const Field& F = E.field();
  const int d = E.dim();
  const auto xs = E.coordinates();
  std::vector<std::uint64_t> c(F.q(), 0);
  const auto stride = static_cast<std::size_t>(d);
  for (std::size_t i = 0; i < E.size(); ++i)
    for (std::size_t j = 0; j < E.size(); ++j)
      ++c[detail::phi_raw(F, xs.data() + i * stride, xs.data() + j * stride, d)];
  NuProfile prof;
  prof.source = NuSource::brute;
  prof.set_size = E.size();
  prof.counts.assign(c.begin(), c.end());
  return prof;
}

inline std::uint64_t nu_brute(const PointSet& E, Elem t, std::uint64_t pair_budget = kDefaultPairBudget) {
  detail::require_phi_space(E);
  detail::require_pairs(E, pair_budget);
  const Field& F = E.field();
  const int d = E.dim();
  const auto xs = E.coordinates();
  const auto stride = static_cast<std::size_t>(d);
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < E.size(); ++i)
    for (std::size_t j = 0; j < E.size(); ++j)
      c += detail::phi_raw(F, xs.data() + i * stride, xs.data() + j * stride, d) == t.index;
  return c;
}

/// Evaluates nu(t), t != 0, from the Fourier expansion
///
///   nu(t) = |E|^2/q - sum_m S0^(m') S0^(m'') |V(m)|^2
///           + q^-d G_1^d eta^(d/2)(-t) sum_{t||m'|| = ||m''||} |V(m)|^2
///           - q^-1 G_1^d eta^(d/2)(-t) |E|,
///
/// where V(m) = sum_{x in E} chi(-m . x) is the unnormalized transform.
/// Every frequency is visited once and |V(m)|^2 is bucketed by the classes
/// of its two halves (half = 0, else the half's norm), which is all either
/// sum depends on. Each result is checked to be a nonnegative integer.
class FourierCounter {
 public:
  explicit FourierCounter(const PointSet& E, std::uint64_t cap = kDefaultCap)
      : F_(E.field()),
        d_(check(E)),
        size_(E.size()),
        half_(F_, d_ / 2),
        sphere_term_(F_),
        gd_(pow(gauss_sum(F_, F_.one()), d_)) {
    const FourierTable T = dft(E, cap);
    const auto classes = static_cast<std::size_t>(F_.q()) + 1;
    const auto p = static_cast<std::size_t>(F_.p());
    std::vector<std::int64_t> acc(classes * classes * p, 0);
    const auto h = static_cast<std::size_t>(d_ / 2);
    std::vector<std::uint32_t> m(static_cast<std::size_t>(d_));
    for (std::uint64_t mc = 0; mc < T.size(); ++mc) {
      T.space().decode(mc, m);
      const std::uint32_t k1 = half_.class_of(std::span(m).subspan(0, h));
      const std::uint32_t k2 = half_.class_of(std::span(m).subspan(h, h));
      detail::add_abs_square(T.raw(mc), std::span(acc).subspan((k1 * classes + k2) * p, p));
    }
    buckets_.reserve(classes * classes);
    for (std::size_t k = 0; k < classes * classes; ++k)
      buckets_.push_back(CycNum::from_full(F_.p(), F_.q(), std::span(acc).subspan(k * p, p)));

    // sum_m S0^(m') S0^(m'') |V(m)|^2 does not depend on t.
    for (std::uint32_t k1 = 0; k1 < classes; ++k1)
      for (std::uint32_t k2 = 0; k2 < classes; ++k2) {
        const CycNum& b = buckets_[k1 * classes + k2];
        if (!b.is_zero()) sphere_term_ += half_.by_class(k1) * half_.by_class(k2) * b;
      }
  }

  int dim() const { return d_; }
  std::size_t set_size() const { return size_; }

  /// nu(t) as an exact element of Q(zeta_p), before the integrality check.
  CycNum nu_exact(Elem t) const {
    if (t.index == 0) throw std::invalid_argument("the Fourier expansion of nu(t) holds for t != 0 only");
    const auto classes = static_cast<std::size_t>(F_.q()) + 1;
    const auto e = static_cast<std::int64_t>(size_);
    const int eta_factor = (d_ / 2) % 2 == 1 ? F_.eta(F_.neg(t)) : 1;

    CycNum cone(F_);
    for (std::uint32_t k1 = 0; k1 < classes; ++k1)
      for (std::uint32_t k2 = 0; k2 < classes; ++k2) {
        const std::uint32_t n1 = k1 == 0 ? 0 : k1 - 1, n2 = k2 == 0 ? 0 : k2 - 1;
        if (F_.muli(t.index, n1) == n2) cone += buckets_[k1 * classes + k2];
      }

    CycNum nu = CycNum::rational(F_, e * e, 1);
    nu -= sphere_term_;
    nu += (gd_ * cone * eta_factor).scaled(d_);
    nu -= (gd_ * (eta_factor * e)).scaled(1);
    return nu;
  }

  std::uint64_t nu(Elem t) const {
    const CycNum v = nu_exact(t);
    const auto k = v.as_integer();
    if (!k || *k < 0)
      throw std::logic_error("Fourier evaluation of nu(" + std::to_string(t.index) +
                             ") is not a nonnegative integer; the transform stack is inconsistent");
    return static_cast<std::uint64_t>(*k);
  }

  NuProfile profile() const {
    NuProfile prof;
    prof.source = NuSource::fourier;
    prof.set_size = size_;
    prof.counts.assign(F_.q(), std::nullopt);
    for (std::uint32_t t = 1; t < F_.q(); ++t) prof.counts[t] = nu(Elem{t});
    return prof;
  }

 private:
  static int check(const PointSet& E) {
    if (E.dim() < 4 || E.dim() % 2 != 0)
      throw std::invalid_argument("the Fourier expansion of nu needs even d >= 4, got d = " + std::to_string(E.dim()));
    return E.dim();
  }

  Field F_;
  int d_;
  std::size_t size_;
  ZeroSphereTransform half_;
  std::vector<CycNum> buckets_;
  CycNum sphere_term_;
  CycNum gd_;
};

inline std::uint64_t nu_fourier(const PointSet& E, Elem t, std::uint64_t cap = kDefaultCap) {
  if (t.index == 0) throw std::invalid_argument("the Fourier expansion of nu(t) holds for t != 0 only");
  return FourierCounter(E, cap).nu(t);
}

/// phi(E, E) as a sorted list of field elements. Uses the pair loop when
/// |E|^2 fits the pair budget, else the Fourier route plus 0 in E - E.
inline std::vector<Elem> phi_image(const PointSet& E, std::uint64_t pair_budget = kDefaultPairBudget,
                                   std::uint64_t cap = kDefaultCap) {
  std::vector<Elem> out;
  if (E.empty()) return out;
  const auto n = static_cast<std::uint64_t>(E.size());
  const NuProfile prof = n * n <= pair_budget ? nu_brute_profile(E, pair_budget) : FourierCounter(E, cap).profile();
  for (std::uint32_t t = 0; t < prof.counts.size(); ++t)
    if (t == 0 || prof.counts[t].value() > 0) out.push_back(Elem{t});
  return out;
}

// Lower bounds on min_{t != 0} nu(t). All exponents are integral under the
// stated hypotheses.

/// (1/q + 1/q^2) |E| (|E| - q^2), for E in F_q^4 with q = 3 mod 4.
inline Rational lower_bound_d4(std::uint64_t set_size, std::uint64_t q) {
  if (q % 4 != 3) throw std::invalid_argument("bound needs q = 3 mod 4, got q = " + std::to_string(q));
  const Rational e(static_cast<long long>(set_size));
  const auto qq = static_cast<std::int64_t>(q);
  return (q_power(qq, -1) + q_power(qq, -2)) * e * (e - q_power(qq, 2));
}

/// Hypothesis families for dimensions beyond 4.
enum class BoundCase {
  d4mod8_q3mod4,  // d = 8k + 4 (k >= 1), q = 3 mod 4
  d0mod4,         // d = 4k (k >= 1)
  d2mod4,         // d = 4k + 2 (k >= 1)
};

inline const char* to_string(BoundCase c) {
  switch (c) {
    case BoundCase::d4mod8_q3mod4: return "d=4 mod 8, q=3 mod 4";
    case BoundCase::d0mod4: return "d=0 mod 4";
    case BoundCase::d2mod4: return "d=2 mod 4";
  }
  return "?";
}

inline Rational lower_bound_general(std::uint64_t set_size, std::uint64_t q, int d, BoundCase c) {
  const Rational e(static_cast<long long>(set_size));
  const auto qq = static_cast<std::int64_t>(q);
  const Rational lead = e * e * q_power(qq, -1);
  switch (c) {
    case BoundCase::d4mod8_q3mod4:
      if (d % 8 != 4 || d < 12) throw std::invalid_argument("bound needs d = 8k + 4 with k >= 1, got d = " + std::to_string(d));
      if (q % 4 != 3) throw std::invalid_argument("bound needs q = 3 mod 4, got q = " + std::to_string(q));
      return lead - e * e * q_power(qq, -2) - q_power(qq, (3 * d - 8) / 4) * e - q_power(qq, (d - 4) / 2) * e -
             q_power(qq, (d - 2) / 2) * e;
    case BoundCase::d0mod4:
      if (d % 4 != 0 || d < 4) throw std::invalid_argument("bound needs d = 4k with k >= 1, got d = " + std::to_string(d));
      return lead - 4 * e * e * q_power(qq, -2) - 4 * q_power(qq, (3 * d - 4) / 4) * e;
    case BoundCase::d2mod4:
      if (d % 4 != 2 || d < 6) throw std::invalid_argument("bound needs d = 4k + 2 with k >= 1, got d = " + std::to_string(d));
      return lead - e * e * q_power(qq, -2) - 3 * q_power(qq, (3 * d - 6) / 4) * e;
  }
  throw std::invalid_argument("unknown bound case");
}

/// Uniform random subset of the given size (Floyd's algorithm).
inline PointSet random_subset(const Space& S, std::uint64_t size, std::mt19937_64& rng) {
  if (size > S.size())
    throw std::invalid_argument("requested " + std::to_string(size) + " points from a space of " + std::to_string(S.size()));
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(size * 2);
  for (std::uint64_t j = S.size() - size; j < S.size(); ++j) {
    const std::uint64_t r = std::uniform_int_distribution<std::uint64_t>(0, j)(rng);
    if (!chosen.insert(r).second) chosen.insert(j);
  }
  return PointSet(S, std::vector<std::uint64_t>(chosen.begin(), chosen.end()));
}

enum class NuMethod { automatic, brute, fourier, both };

/// Computes the profile by the requested route. `both` cross-checks every t != 0.
inline NuProfile nu_profile(const PointSet& E, NuMethod method, std::uint64_t pair_budget = kDefaultPairBudget,
                            std::uint64_t cap = kDefaultCap) {
  const auto n = static_cast<std::uint64_t>(E.size());
  switch (method) {
    case NuMethod::brute: return nu_brute_profile(E, pair_budget);
    case NuMethod::fourier: return FourierCounter(E, cap).profile();
    case NuMethod::both: {
      NuProfile b = nu_brute_profile(E, pair_budget);
      const NuProfile f = FourierCounter(E, cap).profile();
      for (std::size_t t = 1; t < b.counts.size(); ++t)
        if (b.counts[t] != f.counts[t])
          throw std::logic_error("brute and Fourier counts disagree at t = " + std::to_string(t));
      return b;
    }
    case NuMethod::automatic: break;
  }
  return n * n <= pair_budget ? nu_brute_profile(E, pair_budget) : FourierCounter(E, cap).profile();
}

struct ThresholdRow {
  std::uint64_t size = 0;
  std::uint64_t samples = 0;
  std::uint64_t covered = 0;  // samples with phi(E, E) = F_q
  std::uint64_t min_nu_low = 0;   // smallest min_{t != 0} nu(t) seen
  std::uint64_t min_nu_high = 0;  // largest min_{t != 0} nu(t) seen
  Rational min_nu_mean = 0;
};

struct PlantedResult {
  std::uint64_t size = 0;
  std::vector<Elem> image;
};

struct ThresholdReport {
  std::vector<ThresholdRow> rows;
  std::vector<PlantedResult> planted;
};

/// For each size draws `samples` uniform subsets of F_q^d (seeded) and
/// records how many have full image. Planted sets are evaluated separately.
inline ThresholdReport threshold_experiment(const Field& F, int d, const std::vector<std::uint64_t>& sizes,
                                            std::uint64_t samples, std::uint64_t seed,
                                            const std::vector<PointSet>& planted = {},
                                            NuMethod method = NuMethod::automatic, std::uint64_t cap = kDefaultCap) {
  detail::require_even(d);
  const Space S(F, d, cap);
  for (auto s : sizes)
    if (s > S.size())
      throw std::invalid_argument("size " + std::to_string(s) + " exceeds q^d = " + std::to_string(S.size()));
  ThresholdReport rep;
  std::mt19937_64 rng(seed);
  for (auto size : sizes) {
    ThresholdRow row;
    row.size = size;
    row.samples = samples;
    row.min_nu_low = std::numeric_limits<std::uint64_t>::max();
    Rational total = 0;
    std::vector<PointSet> draws;
    draws.reserve(samples);
    for (std::uint64_t i = 0; i < samples; ++i) draws.push_back(random_subset(S, size, rng));
    for (const auto& E : draws) {
      const std::uint64_t mn = nu_profile(E, method, kDefaultPairBudget, cap).min_nonzero();
      row.covered += mn > 0;
      row.min_nu_low = std::min(row.min_nu_low, mn);
      row.min_nu_high = std::max(row.min_nu_high, mn);
      total += Rational(static_cast<long long>(mn));
    }
    if (samples == 0) row.min_nu_low = 0;
    row.min_nu_mean = samples ? total / Rational(static_cast<long long>(samples)) : Rational(0);
    rep.rows.push_back(row);
  }
  for (const auto& E : planted) rep.planted.push_back({E.size(), phi_image(E)});
  return rep;
}

}  // namespace ffphi
