#pragma once

// Exact arithmetic in q^(-k) Z[zeta_p], the additive character, and Gauss sums.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffphi/field.hpp"

namespace ffphi {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational q_power(std::int64_t q, int e) {
  BigInt b = 1;
  for (int i = 0; i < (e < 0 ? -e : e); ++i) b *= q;
  return e >= 0 ? Rational(b) : Rational(BigInt(1), b);
}

inline std::string to_string(const Rational& r) { return r.str(); }

namespace detail {

inline std::int64_t add_ck(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("cyclotomic coefficient overflow");
  return r;
}

inline std::int64_t mul_ck(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("cyclotomic coefficient overflow");
  return r;
}

}  // namespace detail

/// An exact element q^(-den_exp) * sum_j c_j zeta_p^j of Q(zeta_p).
///
/// Coefficients are kept in the power basis {1, zeta, ..., zeta^(p-2)},
/// reduced with 1 + zeta + ... + zeta^(p-1) = 0. The denominator exponent is
/// minimal, which makes the representation canonical and equality a plain
/// member-wise comparison.
class CycNum {
 public:
  CycNum(int p, std::int64_t q) : p_(p), q_(q), c_(static_cast<std::size_t>(p - 1), 0) {
    if (p < 3) throw std::invalid_argument("cyclotomic order must be an odd prime");
  }
  explicit CycNum(const Field& F) : CycNum(F.p(), F.q()) {}

  static CycNum integer(const Field& F, std::int64_t v) {
    CycNum z(F);
    z.c_[0] = v;
    return z;
  }
  /// v * q^(-den_exp)
  static CycNum rational(const Field& F, std::int64_t v, int den_exp) {
    CycNum z = integer(F, v);
    z.den_ = den_exp;
    z.normalize();
    return z;
  }
  static CycNum zeta_power(const Field& F, int k) {
    CycNum z(F);
    std::vector<std::int64_t> h(static_cast<std::size_t>(F.p()), 0);
    h[static_cast<std::size_t>(((k % F.p()) + F.p()) % F.p())] = 1;
    z.assign_full(h);
    return z;
  }
  /// Element from length-p coefficients over {1, zeta, ..., zeta^(p-1)}.
  static CycNum from_full(int p, std::int64_t q, std::span<const std::int64_t> h, int den_exp = 0) {
    CycNum z(p, q);
    z.assign_full(h);
    z.den_ = den_exp;
    z.normalize();
    return z;
  }

  int p() const { return p_; }
  std::int64_t q() const { return q_; }
  int den_exp() const { return den_; }
  std::span<const std::int64_t> coeffs() const { return c_; }

  bool is_zero() const {
    for (auto c : c_)
      if (c != 0) return false;
    return true;
  }
  bool is_rational() const {
    for (std::size_t j = 1; j < c_.size(); ++j)
      if (c_[j] != 0) return false;
    return true;
  }
  std::optional<Rational> as_rational() const {
    if (!is_rational()) return std::nullopt;
    return Rational(c_[0]) * q_power(q_, -den_);
  }
  std::optional<std::int64_t> as_integer() const {
    if (!is_rational() || den_ != 0) return std::nullopt;
    return c_[0];
  }

  /// Complex conjugation zeta^j -> zeta^(-j).
  CycNum conj() const {
    std::vector<std::int64_t> h(static_cast<std::size_t>(p_), 0);
    for (int j = 0; j < p_ - 1; ++j) h[static_cast<std::size_t>((p_ - j) % p_)] = c_[static_cast<std::size_t>(j)];
    return from_full(p_, q_, h, den_);
  }

  /// this * q^(-k)
  CycNum scaled(int k) const {
    CycNum z = *this;
    if (k >= 0)
      z.den_ += k;
    else
      for (int i = 0; i < -k; ++i) z.mul_all(q_);
    z.normalize();
    return z;
  }

  /// Value at zeta_p = exp(2 pi i / p).
  std::complex<double> embed() const {
    std::complex<double> s = 0.0;
    for (int j = 0; j < p_ - 1; ++j)
      s += static_cast<double>(c_[static_cast<std::size_t>(j)]) *
           std::polar(1.0, 2.0 * std::numbers::pi * j / static_cast<double>(p_));
    return s / std::pow(static_cast<double>(q_), den_);
  }

  CycNum& operator+=(const CycNum& o) { return accumulate(o, 1); }
  CycNum& operator-=(const CycNum& o) { return accumulate(o, -1); }
  CycNum& operator*=(std::int64_t k) {
    mul_all(k);
    normalize();
    return *this;
  }
  CycNum& operator*=(const CycNum& o) {
    same_ring(o);
    std::vector<std::int64_t> h(static_cast<std::size_t>(p_), 0);
    for (int i = 0; i < p_ - 1; ++i) {
      const auto a = c_[static_cast<std::size_t>(i)];
      if (a == 0) continue;
      for (int j = 0; j < p_ - 1; ++j) {
        auto& slot = h[static_cast<std::size_t>((i + j) % p_)];
        slot = detail::add_ck(slot, detail::mul_ck(a, o.c_[static_cast<std::size_t>(j)]));
      }
    }
    assign_full(h);
    den_ += o.den_;
    normalize();
    return *this;
  }

  friend CycNum operator+(CycNum a, const CycNum& b) { return a += b; }
  friend CycNum operator-(CycNum a, const CycNum& b) { return a -= b; }
  friend CycNum operator*(CycNum a, const CycNum& b) { return a *= b; }
  friend CycNum operator*(CycNum a, std::int64_t k) { return a *= k; }
  friend CycNum operator*(std::int64_t k, CycNum a) { return a *= k; }
  friend CycNum operator-(CycNum a) { return a *= -1; }

  friend bool operator==(const CycNum& a, const CycNum& b) {
    return a.p_ == b.p_ && a.q_ == b.q_ && a.den_ == b.den_ && a.c_ == b.c_;
  }

 private:
  void same_ring(const CycNum& o) const {
    if (o.p_ != p_ || o.q_ != q_) throw std::invalid_argument("cyclotomic operands from different fields");
  }

  void assign_full(std::span<const std::int64_t> h) {
    if (h.size() != static_cast<std::size_t>(p_)) throw std::invalid_argument("full basis vector must have length p");
    const auto top = h[static_cast<std::size_t>(p_ - 1)];
    for (int j = 0; j < p_ - 1; ++j)
      c_[static_cast<std::size_t>(j)] = detail::add_ck(h[static_cast<std::size_t>(j)], -top);
  }

  void mul_all(std::int64_t k) {
    for (auto& c : c_) c = detail::mul_ck(c, k);
  }

  CycNum& accumulate(const CycNum& o, std::int64_t sign) {
    same_ring(o);
    const int den = std::max(den_, o.den_);
    for (int i = den_; i < den; ++i) mul_all(q_);
    std::int64_t lift = sign;
    for (int i = o.den_; i < den; ++i) lift = detail::mul_ck(lift, q_);
    for (std::size_t j = 0; j < c_.size(); ++j) c_[j] = detail::add_ck(c_[j], detail::mul_ck(lift, o.c_[j]));
    den_ = den;
    normalize();
    return *this;
  }

  void normalize() {
    if (is_zero()) {
      den_ = 0;
      return;
    }
    while (den_ > 0) {
      for (auto c : c_)
        if (c % q_ != 0) return;
      for (auto& c : c_) c /= q_;
      --den_;
    }
  }

  int p_;
  std::int64_t q_;
  int den_ = 0;
  std::vector<std::int64_t> c_;
};

inline CycNum pow(CycNum base, int e) {
  if (e < 0) throw std::invalid_argument("negative cyclotomic power");
  std::vector<std::int64_t> one(static_cast<std::size_t>(base.p()), 0);
  one[0] = 1;
  CycNum r = CycNum::from_full(base.p(), base.q(), one);
  for (; e > 0; e >>= 1) {
    if (e & 1) r *= base;
    if (e > 1) base *= base;
  }
  return r;
}

/// The canonical additive character chi(x) = zeta_p^trace(x).
inline CycNum chi(const Field& F, Elem x) { return CycNum::zeta_power(F, F.trace(x)); }

/// sum over alpha in F_q^n of chi(beta . alpha), by direct enumeration.
inline CycNum orthogonality_sum(const Field& F, std::span<const Elem> beta, std::uint64_t cap = kDefaultCap) {
  const int n = static_cast<int>(beta.size());
  const std::uint64_t total = detail::space_size(F.q(), n, cap);
  std::vector<std::int64_t> h(static_cast<std::size_t>(F.p()), 0);
  std::vector<std::uint32_t> alpha(static_cast<std::size_t>(n), 0);
  for (std::uint64_t k = 0; k < total; ++k) {
    int e = 0;
    for (int i = 0; i < n; ++i) e += F.trmuli(beta[static_cast<std::size_t>(i)].index, alpha[static_cast<std::size_t>(i)]);
    ++h[static_cast<std::size_t>(e % F.p())];
    for (int i = n - 1; i >= 0; --i) {
      if (++alpha[static_cast<std::size_t>(i)] < F.q()) break;
      alpha[static_cast<std::size_t>(i)] = 0;
    }
  }
  return CycNum::from_full(F.p(), F.q(), h);
}

namespace detail {

inline CycNum gauss_direct(const Field& F, Elem a) {
  std::vector<std::int64_t> h(static_cast<std::size_t>(F.p()), 0);
  for (std::uint32_t s = 1; s < F.q(); ++s) h[static_cast<std::size_t>(F.trmuli(a.index, s))] += F.eta(Elem{s});
  return CycNum::from_full(F.p(), F.q(), h);
}

}  // namespace detail

/// The Gauss sum sum_{s != 0} eta(s) chi(a s). Throws if the scaling law
/// G_a = eta(a) G_1 fails.
inline CycNum gauss_sum(const Field& F, Elem a) {
  if (a.index == 0) throw std::invalid_argument("Gauss sum requires a nonzero argument");
  CycNum g = detail::gauss_direct(F, a);
  if (a != F.one() && !(g == detail::gauss_direct(F, F.one()) * F.eta(a)))
    throw std::logic_error("Gauss sum scaling G_a = eta(a) G_1 failed in F_" + F.designation());
  return g;
}

/// Exact check of G_1^2 = eta(-1) q in Z[zeta_p].
inline bool verify_gauss_square(const Field& F) {
  const CycNum g = gauss_sum(F, F.one());
  return g * g == CycNum::integer(F, F.eta(F.neg(F.one())) * static_cast<std::int64_t>(F.q()));
}

/// The closed value of G_1: (-1)^(ell-1) sqrt(q) for p = 1 mod 4 and
/// (-1)^(ell-1) i^ell sqrt(q) for p = 3 mod 4.
inline std::complex<double> gauss_sum_predicted(const Field& F) {
  const double sign = (F.ell() - 1) % 2 == 0 ? 1.0 : -1.0;
  std::complex<double> v = sign * std::sqrt(static_cast<double>(F.q()));
  if (F.p() % 4 == 3) v *= std::pow(std::complex<double>(0.0, 1.0), F.ell());
  return v;
}

/// eta(a) G_1 chi(b^2 / (-4a)).
inline CycNum completed_square_closed(const Field& F, Elem a, Elem b) {
  if (a.index == 0) throw std::invalid_argument("completed square requires a nonzero leading coefficient");
  const Elem four_a = F.mul(F.from_int(-4), a);
  return gauss_sum(F, F.one()) * F.eta(a) * chi(F, F.div(F.square(b), four_a));
}

/// sum_{s in F_q} chi(a s^2 + b s) by direct summation; throws if it
/// disagrees with the completed-square closed form.
inline CycNum completed_square_sum(const Field& F, Elem a, Elem b) {
  if (a.index == 0) throw std::invalid_argument("completed square requires a nonzero leading coefficient");
  std::vector<std::int64_t> h(static_cast<std::size_t>(F.p()), 0);
  for (std::uint32_t s = 0; s < F.q(); ++s) {
    const Elem se{s};
    ++h[static_cast<std::size_t>(F.trace(F.add(F.mul(a, F.square(se)), F.mul(b, se))))];
  }
  CycNum direct = CycNum::from_full(F.p(), F.q(), h);
  if (!(direct == completed_square_closed(F, a, b)))
    throw std::logic_error("completed-square identity failed in F_" + F.designation());
  return direct;
}

}  // namespace ffphi
