#pragma once

// Arithmetic in F_q, q = p^ell odd, with table-driven operations.
//
// Elements are encoded as an index in [0, q) whose base-p digits are the
// coefficients of the element in the basis {1, a, ..., a^(ell-1)}, where a is
// a root of the field's modulus polynomial. Digit 0 (least significant) is the
// constant term, so the prime subfield occupies indices [0, p).

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ffphi {

/// Largest field order for which tables are built.
inline constexpr std::uint64_t kDefaultFieldCap = 1024;
/// Largest ambient space q^n any enumeration may touch.
inline constexpr std::uint64_t kDefaultCap = std::uint64_t{1} << 24;

/// Raised when an operation would exceed a configured size budget.
class BudgetExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct Elem {
  std::uint32_t index = 0;

  friend constexpr auto operator<=>(const Elem&, const Elem&) = default;
};

namespace detail {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// q^n, or nullopt when the result does not fit in 63 bits.
inline std::optional<std::uint64_t> checked_pow(std::uint64_t q, int n) {
  std::uint64_t r = 1;
  for (int i = 0; i < n; ++i) {
    if (q != 0 && r > (std::numeric_limits<std::uint64_t>::max() >> 1) / q) return std::nullopt;
    r *= q;
  }
  return r;
}

inline std::uint64_t space_size(std::uint64_t q, int n, std::uint64_t cap) {
  auto s = checked_pow(q, n);
  if (!s || *s > cap)
    throw BudgetExceeded("q^n = " + std::to_string(q) + "^" + std::to_string(n) +
                         " exceeds the enumeration cap of " + std::to_string(cap) + " points");
  return *s;
}

// Dense polynomials over F_p, coefficient i multiplies x^i.
using Poly = std::vector<int>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int inv_mod(int a, int p) {
  int r = 1, e = p - 2;
  long long b = a % p;
  while (e > 0) {
    if (e & 1) r = static_cast<int>((r * b) % p);
    b = (b * b) % p;
    e >>= 1;
  }
  return r;
}

/// Remainder of a modulo b (b nonzero after trimming).
inline Poly poly_mod(Poly a, const Poly& b, int p) {
  trim(a);
  const int db = static_cast<int>(b.size()) - 1;
  const int lead_inv = inv_mod(b.back(), p);
  while (static_cast<int>(a.size()) - 1 >= db && !a.empty()) {
    const int shift = static_cast<int>(a.size()) - 1 - db;
    const int factor = static_cast<int>((static_cast<long long>(a.back()) * lead_inv) % p);
    for (int i = 0; i <= db; ++i) {
      a[shift + i] = static_cast<int>((a[shift + i] - static_cast<long long>(factor) * b[i]) % p);
      if (a[shift + i] < 0) a[shift + i] += p;
    }
    trim(a);
  }
  return a;
}

/// Monic polynomial of the given degree whose low coefficients are the base-p
/// digits of `code`, least significant digit first.
inline Poly monic_from_code(std::uint64_t code, int degree, int p) {
  Poly f(degree + 1, 0);
  for (int i = 0; i < degree; ++i) {
    f[i] = static_cast<int>(code % p);
    code /= p;
  }
  f[degree] = 1;
  return f;
}

/// Irreducibility by exhaustive trial division over monic divisors of degree <= deg/2.
inline bool is_irreducible(const Poly& f, int p) {
  const int deg = static_cast<int>(f.size()) - 1;
  for (int k = 1; k <= deg / 2; ++k) {
    const std::uint64_t count = *checked_pow(p, k);
    for (std::uint64_t c = 0; c < count; ++c)
      if (poly_mod(f, monic_from_code(c, k, p), p).empty()) return false;
  }
  return true;
}

/// Lexicographically smallest monic irreducible of degree ell, comparing the
/// coefficient vectors constant term first.
inline Poly smallest_irreducible(int p, int ell) {
  const std::uint64_t count = *checked_pow(p, ell);
  for (std::uint64_t rank = 0; rank < count; ++rank) {
    // rank enumerates (c_0, ..., c_{ell-1}) with c_0 the most significant digit
    Poly f(ell + 1, 0);
    std::uint64_t r = rank;
    for (int i = ell - 1; i >= 0; --i) {
      f[i] = static_cast<int>(r % p);
      r /= p;
    }
    f[ell] = 1;
    if (ell == 1 || is_irreducible(f, p)) return f;
  }
  throw std::logic_error("no irreducible polynomial found");
}

}  // namespace detail

/// The finite field F_q with q = p^ell, p an odd prime.
///
/// A Field is an immutable handle onto shared lookup tables; copying is cheap
/// and copies compare equal. All operations are pure.
class Field {
 public:
  /// F_{p^ell} modulo the lexicographically smallest monic irreducible.
  static Field make(int p, int ell = 1, std::uint64_t max_q = kDefaultFieldCap) {
    validate(p, ell, max_q);
    return Field(p, ell, detail::smallest_irreducible(p, ell));
  }

  /// F_{p^ell} modulo a caller-chosen monic irreducible (low degree first).
  static Field with_modulus(int p, std::vector<int> modulus, std::uint64_t max_q = kDefaultFieldCap) {
    if (modulus.size() < 2) throw std::invalid_argument("modulus must have degree >= 1");
    const int ell = static_cast<int>(modulus.size()) - 1;
    validate(p, ell, max_q);
    for (int& c : modulus) c = ((c % p) + p) % p;
    if (modulus.back() != 1) throw std::invalid_argument("modulus must be monic");
    if (!detail::is_irreducible(modulus, p)) throw std::invalid_argument("modulus is reducible over F_p");
    return Field(p, ell, std::move(modulus));
  }

  int p() const { return t_->p; }
  int ell() const { return t_->ell; }
  std::uint32_t q() const { return t_->q; }
  const std::vector<int>& modulus() const { return t_->modulus; }

  /// "p" for prime fields, "p^ell" otherwise.
  std::string designation() const {
    return ell() == 1 ? std::to_string(p()) : std::to_string(p()) + "^" + std::to_string(ell());
  }

  Elem zero() const { return Elem{0}; }
  Elem one() const { return Elem{1}; }
  Elem elem(std::uint32_t index) const {
    if (index >= q()) throw std::out_of_range("element index " + std::to_string(index) + " outside F_" + designation());
    return Elem{index};
  }
  /// Image of an integer in the prime subfield.
  Elem from_int(long long k) const {
    const long long p = t_->p;
    return Elem{static_cast<std::uint32_t>(((k % p) + p) % p)};
  }

  Elem add(Elem a, Elem b) const { return Elem{addi(a.index, b.index)}; }
  Elem sub(Elem a, Elem b) const { return Elem{addi(a.index, t_->neg[b.index])}; }
  Elem neg(Elem a) const { return Elem{t_->neg[a.index]}; }
  Elem mul(Elem a, Elem b) const { return Elem{muli(a.index, b.index)}; }
  Elem square(Elem a) const { return Elem{muli(a.index, a.index)}; }
  Elem inv(Elem a) const {
    if (a.index == 0) throw std::domain_error("inverse of zero");
    return Elem{t_->inv[a.index]};
  }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t e) const {
    std::uint32_t r = 1, b = a.index;
    while (e > 0) {
      if (e & 1) r = muli(r, b);
      b = muli(b, b);
      e >>= 1;
    }
    return Elem{r};
  }

  /// Quadratic character: 1 on nonzero squares, -1 on nonsquares, 0 at 0.
  int eta(Elem a) const { return t_->eta[a.index]; }

  /// Absolute trace x + x^p + ... + x^(p^(ell-1)), as a residue in [0, p).
  int trace(Elem a) const { return t_->trace[a.index]; }

  // Raw-index kernels for inner loops.
  std::uint32_t addi(std::uint32_t a, std::uint32_t b) const { return t_->add[a * t_->q + b]; }
  std::uint32_t subi(std::uint32_t a, std::uint32_t b) const { return t_->add[a * t_->q + t_->neg[b]]; }
  std::uint32_t muli(std::uint32_t a, std::uint32_t b) const { return t_->mul[a * t_->q + b]; }
  std::uint32_t invi(std::uint32_t a) const { return t_->inv[a]; }
  std::uint32_t negi(std::uint32_t a) const { return t_->neg[a]; }
  /// trace(a * b) as a residue in [0, p).
  int trmuli(std::uint32_t a, std::uint32_t b) const { return t_->trmul[a * t_->q + b]; }

  friend bool operator==(const Field& a, const Field& b) {
    return a.t_ == b.t_ || (a.p() == b.p() && a.modulus() == b.modulus());
  }

 private:
  struct Tables {
    int p = 0;
    int ell = 0;
    std::uint32_t q = 0;
    std::vector<int> modulus;
    std::vector<std::uint16_t> add, mul, trmul;
    std::vector<std::uint16_t> neg, inv;
    std::vector<std::int8_t> eta;
    std::vector<std::uint16_t> trace;
  };

  static void validate(int p, int ell, std::uint64_t max_q) {
    if (p == 2) throw std::invalid_argument("characteristic 2 is not supported; p must be an odd prime");
    if (p < 2 || !detail::is_prime(static_cast<std::uint64_t>(p)))
      throw std::invalid_argument(std::to_string(p) + " is not a prime");
    if (ell < 1) throw std::invalid_argument("extension degree must be >= 1");
    auto q = detail::checked_pow(static_cast<std::uint64_t>(p), ell);
    const std::uint64_t hard = std::min<std::uint64_t>(max_q, 65535);
    if (!q || *q > hard)
      throw BudgetExceeded("field order " + std::to_string(p) + "^" + std::to_string(ell) + " exceeds the cap of " +
                           std::to_string(hard));
  }

  Field(int p, int ell, std::vector<int> modulus) {
    auto t = std::make_shared<Tables>();
    t->p = p;
    t->ell = ell;
    t->q = static_cast<std::uint32_t>(*detail::checked_pow(p, ell));
    t->modulus = std::move(modulus);
    build(*t);
    t_ = std::move(t);
  }

  static void build(Tables& t) {
    const std::uint32_t q = t.q;
    const int p = t.p, ell = t.ell;
    auto digits = [&](std::uint32_t x) {
      detail::Poly d(ell);
      for (int i = 0; i < ell; ++i) {
        d[i] = static_cast<int>(x % p);
        x /= p;
      }
      return d;
    };
    auto index = [&](const detail::Poly& d) {
      std::uint32_t x = 0;
      for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) x = x * p + static_cast<std::uint32_t>(d[i]);
      return x;
    };
    auto polymul = [&](std::uint32_t a, std::uint32_t b) {
      const auto da = digits(a), db = digits(b);
      detail::Poly prod(2 * ell - 1, 0);
      for (int i = 0; i < ell; ++i)
        for (int j = 0; j < ell; ++j) prod[i + j] = static_cast<int>((prod[i + j] + 1LL * da[i] * db[j]) % p);
      auto r = ell == 1 ? prod : detail::poly_mod(prod, t.modulus, p);
      r.resize(ell, 0);
      return index(r);
    };

    t.add.resize(std::size_t{q} * q);
    t.neg.resize(q);
    for (std::uint32_t a = 0; a < q; ++a) {
      const auto da = digits(a);
      detail::Poly dn(ell);
      for (int i = 0; i < ell; ++i) dn[i] = (p - da[i]) % p;
      t.neg[a] = static_cast<std::uint16_t>(index(dn));
      for (std::uint32_t b = 0; b < q; ++b) {
        const auto db = digits(b);
        detail::Poly s(ell);
        for (int i = 0; i < ell; ++i) s[i] = (da[i] + db[i]) % p;
        t.add[a * q + b] = static_cast<std::uint16_t>(index(s));
      }
    }

    // Multiplication through discrete logs of a primitive element.
    std::vector<std::uint32_t> exp_table;
    for (std::uint32_t cand = 2; cand < q; ++cand) {
      std::vector<std::uint32_t> powers{1};
      std::uint32_t x = cand;
      while (x != 1 && powers.size() < q) {
        powers.push_back(x);
        x = polymul(x, cand);
      }
      if (powers.size() == q - 1) {
        exp_table = std::move(powers);
        break;
      }
    }
    if (exp_table.size() != q - 1) throw std::logic_error("no primitive element found");
    std::vector<std::uint32_t> log_table(q, 0);
    for (std::uint32_t k = 0; k < q - 1; ++k) log_table[exp_table[k]] = k;

    t.mul.assign(std::size_t{q} * q, 0);
    t.inv.assign(q, 0);
    t.eta.assign(q, 0);
    for (std::uint32_t a = 1; a < q; ++a) {
      t.inv[a] = static_cast<std::uint16_t>(exp_table[(q - 1 - log_table[a]) % (q - 1)]);
      for (std::uint32_t b = 1; b < q; ++b)
        t.mul[a * q + b] = static_cast<std::uint16_t>(exp_table[(log_table[a] + log_table[b]) % (q - 1)]);
    }

    for (std::uint32_t a = 1; a < q; ++a) t.eta[a] = -1;
    for (std::uint32_t a = 1; a < q; ++a) t.eta[t.mul[a * q + a]] = 1;

    t.trace.resize(q);
    for (std::uint32_t a = 0; a < q; ++a) {
      std::uint32_t s = 0, x = a;
      for (int i = 0; i < ell; ++i) {
        s = t.add[s * q + x];
        // Frobenius x -> x^p
        std::uint32_t y = 1;
        for (int k = 0; k < p; ++k) y = t.mul[y * q + x];
        x = y;
      }
      if (s >= static_cast<std::uint32_t>(p)) throw std::logic_error("trace left the prime subfield");
      t.trace[a] = static_cast<std::uint16_t>(s);
    }
    t.trmul.resize(std::size_t{q} * q);
    for (std::size_t i = 0; i < t.mul.size(); ++i) t.trmul[i] = t.trace[t.mul[i]];
  }

  std::shared_ptr<const Tables> t_;
};

/// Smallest-index square root of -1; present iff q = 1 mod 4.
inline std::optional<Elem> sqrt_minus_one(const Field& F) {
  const Elem m1 = F.neg(F.one());
  for (std::uint32_t i = 0; i < F.q(); ++i)
    if (F.square(Elem{i}) == m1) return Elem{i};
  return std::nullopt;
}

/// Lexicographically smallest (a, b) by index with a^2 + b^2 = -1.
inline std::pair<Elem, Elem> sum_two_squares_minus_one(const Field& F) {
  const Elem m1 = F.neg(F.one());
  for (std::uint32_t a = 0; a < F.q(); ++a)
    for (std::uint32_t b = 0; b < F.q(); ++b)
      if (F.add(F.square(Elem{a}), F.square(Elem{b})) == m1) return {Elem{a}, Elem{b}};
  throw std::logic_error("-1 is not a sum of two squares; the field cannot have odd order");
}

/// Parses "p^ell" or a plain prime power "q".
inline Field parse_field(const std::string& text, std::uint64_t max_q = kDefaultFieldCap) {
  auto to_int = [&](const std::string& s) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (pos != s.size() || v <= 0 || v > 1'000'000'000)
      throw std::invalid_argument("malformed field designation '" + text + "'");
    return v;
  };
  const auto caret = text.find('^');
  if (caret != std::string::npos) {
    const long long p = to_int(text.substr(0, caret));
    const long long ell = to_int(text.substr(caret + 1));
    return Field::make(static_cast<int>(p), static_cast<int>(ell), max_q);
  }
  const long long q = to_int(text);
  long long p = 2;
  while (p * p <= q && q % p != 0) ++p;
  if (q % p != 0) p = q;
  int ell = 0;
  long long r = q;
  while (r % p == 0) {
    r /= p;
    ++ell;
  }
  if (r != 1) throw std::invalid_argument(text + " is not a prime power");
  return Field::make(static_cast<int>(p), ell, max_q);
}

/// The quadratic norm v_1^2 + ... + v_k^2 over raw element indices.
template <class Range>
std::uint32_t norm_of(const Field& F, const Range& v) {
  std::uint32_t s = 0;
  for (std::uint32_t x : v) s = F.addi(s, F.muli(x, x));
  return s;
}

}  // namespace ffphi
