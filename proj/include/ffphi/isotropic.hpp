#pragma once

// Totally isotropic subspaces of the form x_1^2 + ... + x_n^2 and the product
// sets F_q^(d/2) x H on which phi vanishes identically.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffphi/counting.hpp"
#include "ffphi/field.hpp"
#include "ffphi/fourier.hpp"
#include "ffphi/varieties.hpp"

namespace ffphi {

using Vec = std::vector<std::uint32_t>;

inline std::uint32_t dot(const Field& F, std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  std::uint32_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s = F.addi(s, F.muli(a[i], b[i]));
  return s;
}

/// Rank over F_q by Gaussian elimination.
inline int rank(const Field& F, std::vector<Vec> rows) {
  if (rows.empty()) return 0;
  const std::size_t n = rows.front().size();
  int r = 0;
  for (std::size_t col = 0; col < n && r < static_cast<int>(rows.size()); ++col) {
    std::size_t piv = static_cast<std::size_t>(r);
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[static_cast<std::size_t>(r)]);
    const std::uint32_t inv = F.invi(rows[static_cast<std::size_t>(r)][col]);
    for (auto& v : rows[static_cast<std::size_t>(r)]) v = F.muli(v, inv);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == static_cast<std::size_t>(r) || rows[i][col] == 0) continue;
      const std::uint32_t f = rows[i][col];
      for (std::size_t j = 0; j < n; ++j) rows[i][j] = F.subi(rows[i][j], F.muli(f, rows[static_cast<std::size_t>(r)][j]));
    }
    ++r;
  }
  return r;
}

/// A basis of a subspace of F_q^n.
class SubspaceBasis {
 public:
  SubspaceBasis(Field F, int n, std::vector<Vec> basis = {}) : F_(std::move(F)), n_(n), basis_(std::move(basis)) {
    for (const auto& b : basis_)
      if (static_cast<int>(b.size()) != n_) throw std::invalid_argument("basis vector has wrong dimension");
  }

  const Field& field() const { return F_; }
  int ambient_dim() const { return n_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Vec>& vectors() const { return basis_; }
  std::uint64_t span_size() const { return *detail::checked_pow(F_.q(), dim()); }

  bool independent() const { return rank(F_, basis_) == dim(); }

  /// ||b_i|| = 0 and b_i . b_j = 0 for all i, j. In odd characteristic this
  /// certifies that the norm vanishes on the whole span.
  bool gram_is_zero() const {
    for (std::size_t i = 0; i < basis_.size(); ++i)
      for (std::size_t j = i; j < basis_.size(); ++j)
        if (dot(F_, basis_[i], basis_[j]) != 0) return false;
    return true;
  }

  bool certified() const { return independent() && gram_is_zero(); }

  bool contains(std::span<const std::uint32_t> v) const {
    auto rows = basis_;
    rows.emplace_back(v.begin(), v.end());
    return rank(F_, rows) == dim();
  }

  /// Every element of the span, as point codes in F_q^n.
  std::vector<std::uint64_t> span_codes() const {
    const Space S(F_, n_, kDefaultCap);
    std::vector<std::uint64_t> out;
    out.reserve(span_size());
    Vec coef(basis_.size(), 0), v(static_cast<std::size_t>(n_));
    for (std::uint64_t k = 0; k < span_size(); ++k) {
      std::fill(v.begin(), v.end(), 0);
      for (std::size_t i = 0; i < basis_.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = F_.addi(v[j], F_.muli(coef[i], basis_[i][j]));
      out.push_back(S.encode(v));
      for (std::size_t i = 0; i < coef.size(); ++i) {
        if (++coef[i] < F_.q()) break;
        coef[i] = 0;
      }
    }
    return out;
  }

 private:
  Field F_;
  int n_;
  std::vector<Vec> basis_;
};

/// Maximal dimension of a subspace inside {||x|| = 0} in F_q^n:
/// (n-1)/2 for odd n, n/2 for even n with eta(-1)^(n/2) = 1, else (n-2)/2.
inline int max_isotropic_dimension(const Field& F, int n) {
  if (n % 2 == 1) return (n - 1) / 2;
  const int e = F.eta(F.neg(F.one()));
  const int s = (n / 2) % 2 == 0 ? 1 : e;
  return s == 1 ? n / 2 : (n - 2) / 2;
}

/// Explicit maximal totally isotropic subspace.
///
/// q = 1 mod 4: e_(2j-1) + i e_(2j) with i^2 = -1.
/// q = 3 mod 4: per four coordinates the pair (a, b, 1, 0), (-b, a, 0, 1)
/// with a^2 + b^2 = -1, plus (a, b, 1) when three coordinates remain.
inline SubspaceBasis max_isotropic_construct(const Field& F, int n) {
  if (n < 2) throw std::invalid_argument("isotropic construction needs n >= 2");
  std::vector<Vec> basis;
  auto unit = [&] { return Vec(static_cast<std::size_t>(n), 0); };
  if (auto i = sqrt_minus_one(F)) {
    for (int j = 0; j + 1 < n; j += 2) {
      Vec v = unit();
      v[static_cast<std::size_t>(j)] = 1;
      v[static_cast<std::size_t>(j + 1)] = i->index;
      basis.push_back(std::move(v));
    }
  } else {
    const auto [a, b] = sum_two_squares_minus_one(F);
    int j = 0;
    for (; j + 3 < n; j += 4) {
      Vec v = unit(), w = unit();
      const auto k = static_cast<std::size_t>(j);
      v[k] = a.index, v[k + 1] = b.index, v[k + 2] = 1;
      w[k] = F.negi(b.index), w[k + 1] = a.index, w[k + 3] = 1;
      basis.push_back(std::move(v));
      basis.push_back(std::move(w));
    }
    if (n - j == 3) {
      Vec v = unit();
      const auto k = static_cast<std::size_t>(j);
      v[k] = a.index, v[k + 1] = b.index, v[k + 2] = 1;
      basis.push_back(std::move(v));
    }
  }
  SubspaceBasis H(F, n, std::move(basis));
  if (!H.certified()) throw std::logic_error("isotropic construction failed its Gram certificate");
  return H;
}

/// Largest dimension of a totally isotropic subspace, by exhaustive search.
///
/// Depth-first over bases with strictly increasing vector codes, restricted
/// to vectors whose first nonzero coordinate is 1 (one per line). Every
/// subspace has such a basis, so the search is complete.
inline int max_isotropic_brute(const Field& F, int n, std::uint64_t cap = 200'000) {
  if (n < 2) throw std::invalid_argument("isotropic search needs n >= 2");
  const Space S(F, n, cap);
  std::vector<Vec> cone;
  Vec x(static_cast<std::size_t>(n));
  for (std::uint64_t c = 1; c < S.size(); ++c) {
    S.decode(c, x);
    std::size_t lead = 0;
    while (x[lead] == 0) ++lead;
    if (x[lead] == 1 && norm_of(F, x) == 0) cone.push_back(x);
  }

  int best = 0;
  std::vector<Vec> chosen;
  // candidates: indices into cone that are isotropic and orthogonal to every chosen vector
  auto search = [&](auto&& self, const std::vector<std::size_t>& candidates) -> void {
    best = std::max(best, static_cast<int>(chosen.size()));
    for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
      const Vec& v = cone[candidates[ci]];
      if (!chosen.empty()) {
        auto rows = chosen;
        rows.push_back(v);
        if (rank(F, rows) != static_cast<int>(rows.size())) continue;
      }
      std::vector<std::size_t> next;
      for (std::size_t cj = ci + 1; cj < candidates.size(); ++cj)
        if (dot(F, v, cone[candidates[cj]]) == 0) next.push_back(candidates[cj]);
      chosen.push_back(v);
      self(self, next);
      chosen.pop_back();
    }
  };
  std::vector<std::size_t> all(cone.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  search(search, all);
  return best;
}

/// A product set E = F_q^(d/2) x H with phi(E, E) = {0}.
struct SharpnessSet {
  PointSet set;
  SubspaceBasis subspace;
  std::uint64_t expected_size = 0;
  std::string size_formula;  // e.g. "q^(3d/4)"
  std::string family;        // which hypothesis family produced the set
};

/// Builds the extremal set for dimension d. Families:
///   d = 4:                    F_q^2 x {0} (q = 3 mod 4, size q^2) or F_q^2 x {(t, it)} (q = 1 mod 4, size q^3)
///   d = 8k + 4, q = 3 mod 4:  size q^((3d-4)/4)
///   d = 4k with k even, or k odd and q = 1 mod 4: size q^(3d/4)
///   d = 4k + 2:               size q^((3d-2)/4)
/// with k >= 1 throughout.
inline SharpnessSet sharpness_set(const Field& F, int d, std::uint64_t cap = kDefaultCap) {
  if (d % 2 != 0) throw std::invalid_argument("d must be even, got d = " + std::to_string(d));
  if (d < 4) throw std::invalid_argument("d must be at least 4, got d = " + std::to_string(d));
  const bool q1 = F.q() % 4 == 1;
  int exp_num = 0;  // size exponent times 4
  std::string formula, family;
  if (d == 4) {
    exp_num = q1 ? 12 : 8;
    formula = q1 ? "q^3" : "q^2";
    family = q1 ? "d=4, q=1 mod 4" : "d=4, q=3 mod 4";
  } else if (d % 4 == 2) {
    exp_num = 3 * d - 2;
    formula = "q^((3d-2)/4)";
    family = "d=2 mod 4";
  } else if (d % 8 == 4 && !q1) {
    exp_num = 3 * d - 4;
    formula = "q^((3d-4)/4)";
    family = "d=4 mod 8, q=3 mod 4";
  } else {
    const int k = d / 4;
    exp_num = 3 * d;
    formula = "q^(3d/4)";
    family = k % 2 == 0 ? "d=0 mod 8" : "d=4 mod 8, q=1 mod 4";
  }

  const int h = d / 2;
  SubspaceBasis H = max_isotropic_construct(F, h);
  const Space S(F, d, cap);
  const Space half(F, h, cap);
  const auto hcodes = H.span_codes();
  std::vector<std::uint64_t> codes;
  codes.reserve(static_cast<std::size_t>(half.size()) * hcodes.size());
  for (std::uint64_t a = 0; a < half.size(); ++a)
    for (auto b : hcodes) codes.push_back(a * half.size() + b);

  SharpnessSet out{PointSet(S, std::move(codes)), std::move(H), 0, formula, family};
  out.expected_size = *detail::checked_pow(F.q(), exp_num / 4);
  return out;
}

struct NullVerification {
  bool algebraic_ran = false;
  bool algebraic_pass = false;
  bool brute_ran = false;   // all pairs
  bool sample_ran = false;  // pairs within a random subsample
  bool brute_pass = false;
  std::size_t sample_size = 0;
  std::vector<Elem> image;  // phi image over whichever pairs were enumerated

  bool pass() const {
    return (!algebraic_ran || algebraic_pass) && (!(brute_ran || sample_ran) || brute_pass) &&
           (algebraic_ran || brute_ran);
  }
};

/// Two-tier check that phi(E, E) = {0}: the algebraic tier verifies the Gram
/// certificate of H and that E is exactly F_q^(d/2) x span(H); the enumerative
/// tier runs phi over all pairs when |E|^2 <= pair_budget, otherwise over a
/// seeded random subsample.
inline NullVerification verify_null(const SharpnessSet& s, std::uint64_t pair_budget = 10'000'000,
                                    std::size_t subsample = 500, std::uint64_t seed = 1) {
  NullVerification r;
  const PointSet& E = s.set;
  const Field& F = E.field();
  const int d = E.dim();
  const int h = d / 2;

  r.algebraic_ran = true;
  {
    const Space half(F, h);
    const auto hcodes = s.subspace.span_codes();
    std::vector<std::uint64_t> sorted_h(hcodes.begin(), hcodes.end());
    std::sort(sorted_h.begin(), sorted_h.end());
    bool structure = s.subspace.ambient_dim() == h && s.subspace.certified();
    structure = structure && E.size() == half.size() * sorted_h.size();
    for (auto c : E.codes()) {
      if (!structure) break;
      structure = std::binary_search(sorted_h.begin(), sorted_h.end(), c % half.size());
    }
    r.algebraic_pass = structure;
  }

  const auto n = static_cast<std::uint64_t>(E.size());
  PointSet sample = E;
  if (n * n > pair_budget) {
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> codes(E.codes().begin(), E.codes().end());
    std::vector<std::uint64_t> pick;
    std::sample(codes.begin(), codes.end(), std::back_inserter(pick), subsample, rng);
    sample = PointSet(E.space(), std::move(pick));
    r.sample_ran = true;
  } else {
    r.brute_ran = true;
  }
  r.sample_size = sample.size();
  const NuProfile prof = nu_brute_profile(sample, std::max<std::uint64_t>(pair_budget, subsample * subsample));
  for (std::uint32_t t = 0; t < prof.counts.size(); ++t)
    if (prof.counts[t].value() > 0) r.image.push_back(Elem{t});
  r.brute_pass = r.image.size() == 1 && r.image.front() == F.zero();
  return r;
}

}  // namespace ffphi
