#pragma once

// The ratio function phi, the zero sphere S_0, the level sets R_t of phi, and
// exact closed forms for their Fourier transforms.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ffphi/cyclotomic.hpp"
#include "ffphi/field.hpp"
#include "ffphi/fourier.hpp"

namespace ffphi {

/// ||v|| = v_1^2 + ... + v_k^2 (a field value, not a metric).
inline Elem norm(const Field& F, std::span<const Elem> v) {
  Elem s = F.zero();
  for (Elem x : v) s = F.add(s, F.square(x));
  return s;
}

namespace detail {

/// phi on raw coordinates; x and y both have length d = 2h.
inline std::uint32_t phi_raw(const Field& F, const std::uint32_t* x, const std::uint32_t* y, int d) {
  const int h = d / 2;
  std::uint32_t a = 0, b = 0;
  for (int i = 0; i < h; ++i) {
    const std::uint32_t u = F.subi(x[i], y[i]);
    a = F.addi(a, F.muli(u, u));
  }
  for (int i = h; i < d; ++i) {
    const std::uint32_t u = F.subi(x[i], y[i]);
    b = F.addi(b, F.muli(u, u));
  }
  return b == 0 ? 0 : F.muli(a, F.invi(b));
}

inline void require_even(int d) {
  if (d < 2 || d % 2 != 0) throw std::invalid_argument("phi needs an even dimension, got d = " + std::to_string(d));
}

}  // namespace detail

/// ||x' - y'|| / ||x'' - y''||, or 0 when the denominator vanishes; x' is the
/// first half of the coordinates and x'' the second half.
inline Elem phi(const Field& F, std::span<const Elem> x, std::span<const Elem> y) {
  if (x.size() != y.size()) throw std::invalid_argument("phi arguments differ in dimension");
  detail::require_even(static_cast<int>(x.size()));
  std::vector<std::uint32_t> xr, yr;
  for (Elem e : x) xr.push_back(e.index);
  for (Elem e : y) yr.push_back(e.index);
  return Elem{detail::phi_raw(F, xr.data(), yr.data(), static_cast<int>(x.size()))};
}

/// {x in F_q^n : ||x|| = 0}, by exhaustive enumeration.
inline PointSet zero_sphere(const Field& F, int n, std::uint64_t cap = kDefaultCap) {
  Space S(F, n, cap);
  std::vector<std::uint64_t> codes;
  std::vector<std::uint32_t> x(static_cast<std::size_t>(n));
  for (std::uint64_t c = 0; c < S.size(); ++c) {
    S.decode(c, x);
    if (norm_of(F, x) == 0) codes.push_back(c);
  }
  return PointSet(S, std::move(codes));
}

/// All level sets {x : phi(x, 0) = t}, indexed by t; they partition F_q^d.
inline std::vector<PointSet> ratio_spheres(const Field& F, int d, std::uint64_t cap = kDefaultCap) {
  detail::require_even(d);
  Space S(F, d, cap);
  std::vector<std::vector<std::uint64_t>> buckets(F.q());
  std::vector<std::uint32_t> x(static_cast<std::size_t>(d)), zero(static_cast<std::size_t>(d), 0);
  for (std::uint64_t c = 0; c < S.size(); ++c) {
    S.decode(c, x);
    buckets[detail::phi_raw(F, x.data(), zero.data(), d)].push_back(c);
  }
  std::vector<PointSet> out;
  out.reserve(F.q());
  for (auto& b : buckets) out.emplace_back(S, std::move(b));
  return out;
}

inline PointSet ratio_sphere(const Field& F, int d, Elem t, std::uint64_t cap = kDefaultCap) {
  detail::require_even(d);
  Space S(F, d, cap);
  std::vector<std::uint64_t> codes;
  std::vector<std::uint32_t> x(static_cast<std::size_t>(d)), zero(static_cast<std::size_t>(d), 0);
  for (std::uint64_t c = 0; c < S.size(); ++c) {
    S.decode(c, x);
    if (detail::phi_raw(F, x.data(), zero.data(), d) == t.index) codes.push_back(c);
  }
  return PointSet(S, std::move(codes));
}

/// Fourier transform of the zero sphere in F_q^n evaluated from the Gauss-sum
/// closed form
///
///   S0^(m) = delta(m)/q + q^-(n+1) eta(-1)^n G_1^n sum_{r != 0} eta(r)^n chi(r ||m||).
///
/// Values depend on m only through (m == 0, ||m||), so they are cached per class.
class ZeroSphereTransform {
 public:
  ZeroSphereTransform(Field F, int n)
      : F_(std::move(F)), n_(check(n)), gn_(pow(gauss_sum(F_, F_.one()), n)), cache_(F_.q() + 1) {}

  const Field& field() const { return F_; }
  int dim() const { return n_; }

  /// Class index: 0 for m = 0, else 1 + ||m||.
  std::uint32_t class_of(std::span<const std::uint32_t> m) const {
    bool zero = true;
    for (auto v : m) zero = zero && v == 0;
    return zero ? 0 : 1 + norm_of(F_, m);
  }

  const CycNum& by_class(std::uint32_t k) const {
    auto& slot = cache_[k];
    if (!slot) slot = evaluate(k == 0, k == 0 ? 0 : k - 1);
    return *slot;
  }

  CycNum operator()(std::span<const std::uint32_t> m) const {
    if (static_cast<int>(m.size()) != n_) throw std::invalid_argument("frequency has wrong dimension");
    return by_class(class_of(m));
  }

 private:
  static int check(int n) {
    if (n < 2) throw std::invalid_argument("zero-sphere closed form needs n >= 2, got n = " + std::to_string(n));
    return n;
  }

  CycNum evaluate(bool is_origin, std::uint32_t mnorm) const {
    const int p = F_.p();
    std::vector<std::int64_t> h(static_cast<std::size_t>(p), 0);
    for (std::uint32_t r = 1; r < F_.q(); ++r) {
      const int w = n_ % 2 == 0 ? 1 : F_.eta(Elem{r});
      h[static_cast<std::size_t>(F_.trmuli(r, mnorm))] += w;
    }
    CycNum sum = CycNum::from_full(p, F_.q(), h);
    const int sign = (n_ % 2 == 0) ? 1 : F_.eta(F_.neg(F_.one()));
    CycNum v = (gn_ * sum * sign).scaled(n_ + 1);
    if (is_origin) v += CycNum::rational(F_, 1, 1);
    return v;
  }

  Field F_;
  int n_;
  CycNum gn_;
  mutable std::vector<std::optional<CycNum>> cache_;
};

inline CycNum s0_ft_closed(const Field& F, int n, std::span<const std::uint32_t> m) {
  return ZeroSphereTransform(F, n)(m);
}

/// Rational value of S0^(m) from the case analysis on (n mod 4, eta(-1)),
/// together with a tag naming the case used.
struct S0CaseValue {
  Rational value;
  std::string case_tag;
};

inline S0CaseValue s0_ft_by_case(const Field& F, int n, std::span<const std::uint32_t> m) {
  if (n < 2) throw std::invalid_argument("zero-sphere closed form needs n >= 2");
  if (static_cast<int>(m.size()) != n) throw std::invalid_argument("frequency has wrong dimension");
  bool origin = true;
  for (auto v : m) origin = origin && v == 0;
  const std::uint32_t mn = norm_of(F, m);
  const std::int64_t q = F.q();
  const int em1 = F.eta(F.neg(F.one()));
  const Rational inv_q = q_power(q, -1);

  if (n % 2 == 0) {
    const Rational a = q_power(q, -n / 2), b = q_power(q, -(n + 2) / 2);
    int s = 1;
    std::string tag = "n=0 mod 4";
    if (n % 4 == 2) {
      s = em1;
      tag = em1 == -1 ? "n=2 mod 4, q=3 mod 4" : "n=2 mod 4";
    }
    if (origin) return {inv_q + s * a - s * b, tag};
    if (mn == 0) return {s * a - s * b, tag};
    return {-s * b, tag};
  }
  const Rational c = q_power(q, -(n + 1) / 2);
  const bool three = n % 4 == 3;
  const std::string tag = three ? "n=3 mod 4" : "n=1 mod 4";
  if (origin) return {inv_q, tag};
  if (mn == 0) return {Rational(0), tag};
  const Elem arg = three ? F.neg(Elem{mn}) : Elem{mn};
  return {c * F.eta(arg), tag};
}

struct S0Verification {
  bool pass = false;
  bool closed_matches_dft = false;
  bool case_matches_closed = false;
  std::string case_tag;
  std::uint64_t frequencies = 0;
  std::size_t sphere_size = 0;
  std::optional<std::uint64_t> counterexample;
};

/// Compares, at every frequency, the DFT of the enumerated zero sphere with
/// the Gauss-sum closed form and with the case-analysis values.
inline S0Verification verify_s0_ft(const Field& F, int n, std::uint64_t cap = kDefaultCap) {
  S0Verification r;
  const PointSet S0 = zero_sphere(F, n, cap);
  const FourierTable T = dft(S0, cap);
  const ZeroSphereTransform closed(F, n);
  r.sphere_size = S0.size();
  r.closed_matches_dft = r.case_matches_closed = true;
  std::vector<std::uint32_t> m(static_cast<std::size_t>(n));
  for (std::uint64_t mc = 0; mc < T.size(); ++mc) {
    S0.space().decode(mc, m);
    const CycNum c = closed(m);
    const bool ok_dft = T.normalized(mc) == c;
    const auto cv = s0_ft_by_case(F, n, m);
    const auto cr = c.as_rational();
    const bool ok_case = cr && *cr == cv.value;
    r.case_tag = cv.case_tag;
    ++r.frequencies;
    if (!ok_dft || !ok_case) {
      r.closed_matches_dft = r.closed_matches_dft && ok_dft;
      r.case_matches_closed = r.case_matches_closed && ok_case;
      if (!r.counterexample) r.counterexample = mc;
    }
  }
  r.pass = r.closed_matches_dft && r.case_matches_closed;
  return r;
}

/// Fourier transform of R_t (t != 0) from the closed form
///
///   R_t^(m) = delta(m)/q - S0^(m') S0^(m'')
///             + G_1^d q^-(d+1) eta^(d/2)(-t) (q delta(t||m'|| - ||m''||) - 1),
///
/// cached per pair of half-frequency classes.
class RatioSphereTransform {
 public:
  RatioSphereTransform(Field F, int d, Elem t)
      : F_(std::move(F)),
        d_(check(d, t)),
        t_(t),
        half_(F_, d_ / 2),
        // eta^(d/2)(-t) is eta(-t) for odd d/2 and 1 otherwise, since -t != 0
        tail_((pow(gauss_sum(F_, F_.one()), d_) * ((d_ / 2) % 2 == 1 ? F_.eta(F_.neg(t_)) : 1)).scaled(d_ + 1)),
        cache_(std::size_t{F_.q() + 1} * (F_.q() + 1)) {}

  CycNum operator()(std::span<const std::uint32_t> m) const {
    if (static_cast<int>(m.size()) != d_) throw std::invalid_argument("frequency has wrong dimension");
    const auto h = static_cast<std::size_t>(d_ / 2);
    const std::uint32_t k1 = half_.class_of(m.subspan(0, h));
    const std::uint32_t k2 = half_.class_of(m.subspan(h, h));
    auto& slot = cache_[k1 * (F_.q() + 1) + k2];
    if (!slot) slot = evaluate(k1, k2);
    return *slot;
  }

 private:
  static int check(int d, Elem t) {
    if (t.index == 0) throw std::invalid_argument("the R_t closed form is stated for t != 0 only");
    if (d < 4 || d % 2 != 0) throw std::invalid_argument("R_t closed form needs even d >= 4");
    return d;
  }

  CycNum evaluate(std::uint32_t k1, std::uint32_t k2) const {
    const std::uint32_t n1 = k1 == 0 ? 0 : k1 - 1;
    const std::uint32_t n2 = k2 == 0 ? 0 : k2 - 1;
    CycNum v(F_);
    if (k1 == 0 && k2 == 0) v += CycNum::rational(F_, 1, 1);
    v -= half_.by_class(k1) * half_.by_class(k2);
    const bool on_cone = F_.subi(F_.muli(t_.index, n1), n2) == 0;
    v += tail_ * (on_cone ? static_cast<std::int64_t>(F_.q()) - 1 : -1);
    return v;
  }

  Field F_;
  int d_;
  Elem t_;
  ZeroSphereTransform half_;
  CycNum tail_;
  mutable std::vector<std::optional<CycNum>> cache_;
};

inline CycNum rt_ft_closed(const Field& F, int d, Elem t, std::span<const std::uint32_t> m) {
  return RatioSphereTransform(F, d, t)(m);
}

struct RtVerification {
  bool pass = false;
  std::uint64_t comparisons = 0;
  std::vector<std::size_t> sphere_sizes;  // |R_t| for every t, including t = 0
  std::optional<std::pair<std::uint32_t, std::uint64_t>> counterexample;  // (t, m)
};

/// For every t != 0 and every m, compares the DFT of the enumerated R_t with
/// the closed form.
inline RtVerification verify_rt_ft(const Field& F, int d, std::uint64_t cap = kDefaultCap) {
  RtVerification r;
  const auto spheres = ratio_spheres(F, d, cap);
  for (const auto& s : spheres) r.sphere_sizes.push_back(s.size());
  std::vector<std::uint32_t> m(static_cast<std::size_t>(d));
  r.pass = true;
  for (std::uint32_t t = 1; t < F.q(); ++t) {
    const FourierTable T = dft(spheres[t], cap);
    const RatioSphereTransform closed(F, d, Elem{t});
    for (std::uint64_t mc = 0; mc < T.size(); ++mc) {
      spheres[t].space().decode(mc, m);
      ++r.comparisons;
      if (!(T.normalized(mc) == closed(m))) {
        r.pass = false;
        if (!r.counterexample) r.counterexample = std::make_pair(t, mc);
      }
    }
  }
  return r;
}

}  // namespace ffphi
