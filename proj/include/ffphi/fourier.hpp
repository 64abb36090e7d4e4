#pragma once

// Point sets in F_q^n and their exact (unnormalized) discrete Fourier transforms.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffphi/cyclotomic.hpp"
#include "ffphi/field.hpp"

namespace ffphi {

/// Points of F_q^n are encoded as integers in [0, q^n); the first
/// coordinate is the most significant base-q digit.
class Space {
 public:
  Space(Field F, int n, std::uint64_t cap = kDefaultCap)
      : F_(std::move(F)), n_(n), size_(detail::space_size(F_.q(), n, cap)) {
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
  }

  const Field& field() const { return F_; }
  int dim() const { return n_; }
  std::uint64_t size() const { return size_; }

  std::uint64_t encode(std::span<const std::uint32_t> digits) const {
    if (static_cast<int>(digits.size()) != n_) throw std::invalid_argument("point has wrong dimension");
    std::uint64_t c = 0;
    for (auto d : digits) {
      if (d >= F_.q()) throw std::out_of_range("coordinate outside the field");
      c = c * F_.q() + d;
    }
    return c;
  }
  void decode(std::uint64_t code, std::span<std::uint32_t> out) const {
    for (int i = n_ - 1; i >= 0; --i) {
      out[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(code % F_.q());
      code /= F_.q();
    }
  }
  std::vector<std::uint32_t> decode(std::uint64_t code) const {
    std::vector<std::uint32_t> v(static_cast<std::size_t>(n_));
    decode(code, v);
    return v;
  }

  friend bool operator==(const Space& a, const Space& b) { return a.n_ == b.n_ && a.F_ == b.F_; }

 private:
  Field F_;
  int n_;
  std::uint64_t size_;
};

/// A multiplicity-free subset of F_q^n, stored as sorted point codes.
class PointSet {
 public:
  explicit PointSet(Space space) : space_(std::move(space)) {}
  PointSet(Space space, std::vector<std::uint64_t> codes) : space_(std::move(space)), codes_(std::move(codes)) {
    std::sort(codes_.begin(), codes_.end());
    codes_.erase(std::unique(codes_.begin(), codes_.end()), codes_.end());
    if (!codes_.empty() && codes_.back() >= space_.size()) throw std::out_of_range("point code outside F_q^n");
  }

  static PointSet full(const Space& space) {
    std::vector<std::uint64_t> c(space.size());
    for (std::uint64_t i = 0; i < space.size(); ++i) c[i] = i;
    return PointSet(space, std::move(c));
  }

  const Space& space() const { return space_; }
  const Field& field() const { return space_.field(); }
  int dim() const { return space_.dim(); }
  std::size_t size() const { return codes_.size(); }
  bool empty() const { return codes_.empty(); }
  std::span<const std::uint64_t> codes() const { return codes_; }
  bool contains(std::uint64_t code) const { return std::binary_search(codes_.begin(), codes_.end(), code); }

  /// Coordinates of every point, row-major (size() x dim()).
  std::vector<std::uint32_t> coordinates() const {
    std::vector<std::uint32_t> out(codes_.size() * static_cast<std::size_t>(dim()));
    for (std::size_t i = 0; i < codes_.size(); ++i)
      space_.decode(codes_[i], std::span(out).subspan(i * static_cast<std::size_t>(dim()), static_cast<std::size_t>(dim())));
    return out;
  }

  friend bool operator==(const PointSet& a, const PointSet& b) {
    return a.space_ == b.space_ && a.codes_ == b.codes_;
  }

 private:
  Space space_;
  std::vector<std::uint64_t> codes_;
};

/// E + v.
inline PointSet translate(const PointSet& E, std::span<const std::uint32_t> v) {
  const auto& S = E.space();
  const Field& F = E.field();
  std::vector<std::uint32_t> x(static_cast<std::size_t>(S.dim()));
  std::vector<std::uint64_t> out;
  out.reserve(E.size());
  for (auto c : E.codes()) {
    S.decode(c, x);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = F.addi(x[i], v[i]);
    out.push_back(S.encode(x));
  }
  return PointSet(S, std::move(out));
}

/// The map m -> sum_{x in E} chi(-m . x) over all m in F_q^n.
///
/// Entry m is stored as p-1 power-basis coefficients; the normalized
/// transform is q^(-n) times the stored value.
class FourierTable {
 public:
  FourierTable(Space space, std::vector<std::int64_t> coeffs) : space_(std::move(space)), c_(std::move(coeffs)) {}

  const Space& space() const { return space_; }
  const Field& field() const { return space_.field(); }
  /// Exponent k with normalized value = q^(-k) * stored value.
  int norm_exponent() const { return space_.dim(); }
  std::uint64_t size() const { return space_.size(); }

  std::span<const std::int64_t> raw(std::uint64_t m) const {
    const auto w = static_cast<std::size_t>(field().p() - 1);
    return std::span(c_).subspan(static_cast<std::size_t>(m) * w, w);
  }
  CycNum value(std::uint64_t m) const {
    const int p = field().p();
    std::vector<std::int64_t> h(static_cast<std::size_t>(p), 0);
    auto r = raw(m);
    std::copy(r.begin(), r.end(), h.begin());
    return CycNum::from_full(p, field().q(), h);
  }
  /// q^(-n) * value(m)
  CycNum normalized(std::uint64_t m) const { return value(m).scaled(norm_exponent()); }

 private:
  Space space_;
  std::vector<std::int64_t> c_;
};

/// Exact DFT of the indicator of E; O(q^n |E| n) table lookups.
inline FourierTable dft(const PointSet& E, std::uint64_t cap = kDefaultCap) {
  const Space& S = E.space();
  if (S.size() > cap)
    throw BudgetExceeded("DFT over " + std::to_string(S.size()) + " frequencies exceeds the cap of " + std::to_string(cap));
  const Field& F = S.field();
  const int n = S.dim();
  const int p = F.p();
  const auto w = static_cast<std::size_t>(p - 1);
  const auto xs = E.coordinates();
  std::vector<std::int64_t> out(static_cast<std::size_t>(S.size()) * w, 0);
  std::vector<std::int64_t> h(static_cast<std::size_t>(p));
  std::vector<std::uint32_t> m(static_cast<std::size_t>(n), 0);
  for (std::uint64_t mc = 0; mc < S.size(); ++mc) {
    std::fill(h.begin(), h.end(), 0);
    for (std::size_t k = 0; k < E.size(); ++k) {
      const std::uint32_t* x = xs.data() + k * static_cast<std::size_t>(n);
      int e = 0;
      for (int i = 0; i < n; ++i) e += F.trmuli(m[static_cast<std::size_t>(i)], x[i]);
      ++h[static_cast<std::size_t>((p - e % p) % p)];
    }
    std::int64_t* dst = out.data() + static_cast<std::size_t>(mc) * w;
    for (std::size_t j = 0; j < w; ++j) dst[j] = h[j] - h[w];
    for (int i = n - 1; i >= 0; --i) {
      if (++m[static_cast<std::size_t>(i)] < F.q()) break;
      m[static_cast<std::size_t>(i)] = 0;
    }
  }
  return FourierTable(S, std::move(out));
}

/// Checks sum_m chi(m . x) T[m] = q^n 1_E(x) for every x, exactly.
/// Cost is O(q^(2n) p).
inline bool inversion_check(const PointSet& E, const FourierTable& T) {
  const Space& S = E.space();
  if (!(S == T.space())) throw std::invalid_argument("table and set live in different spaces");
  const Field& F = S.field();
  const int n = S.dim();
  const int p = F.p();
  const auto w = static_cast<std::size_t>(p - 1);
  const auto qn = static_cast<std::int64_t>(S.size());

  std::vector<std::uint32_t> ms(static_cast<std::size_t>(S.size()) * static_cast<std::size_t>(n));
  for (std::uint64_t mc = 0; mc < S.size(); ++mc)
    S.decode(mc, std::span(ms).subspan(static_cast<std::size_t>(mc) * static_cast<std::size_t>(n), static_cast<std::size_t>(n)));

  std::vector<std::int64_t> acc(static_cast<std::size_t>(p));
  std::vector<std::uint32_t> x(static_cast<std::size_t>(n));
  for (std::uint64_t xc = 0; xc < S.size(); ++xc) {
    S.decode(xc, x);
    std::fill(acc.begin(), acc.end(), 0);
    for (std::uint64_t mc = 0; mc < S.size(); ++mc) {
      const std::uint32_t* m = ms.data() + static_cast<std::size_t>(mc) * static_cast<std::size_t>(n);
      int e = 0;
      for (int i = 0; i < n; ++i) e += F.trmuli(m[i], x[static_cast<std::size_t>(i)]);
      e %= p;
      auto r = T.raw(mc);
      for (std::size_t j = 0; j < w; ++j) acc[(j + static_cast<std::size_t>(e)) % static_cast<std::size_t>(p)] += r[j];
    }
    const std::int64_t expect = E.contains(xc) ? qn : 0;
    if (acc[0] - acc[w] != expect) return false;
    for (std::size_t j = 1; j < w; ++j)
      if (acc[j] != acc[w]) return false;
  }
  return true;
}

namespace detail {

/// Adds |v|^2 = v * conj(v) of a power-basis vector into a length-p
/// accumulator over {1, zeta, ..., zeta^(p-1)}.
inline void add_abs_square(std::span<const std::int64_t> v, std::span<std::int64_t> acc) {
  const auto p = acc.size();
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j] == 0) continue;
    for (std::size_t l = 0; l < v.size(); ++l) {
      auto& slot = acc[(j + p - l) % p];
      slot = add_ck(slot, mul_ck(v[j], v[l]));
    }
  }
}

}  // namespace detail

/// sum_m |f^(m)|^2 for the normalized transform, as an exact rational.
inline Rational plancherel_sum(const FourierTable& T) {
  const Field& F = T.field();
  std::vector<std::int64_t> acc(static_cast<std::size_t>(F.p()), 0);
  for (std::uint64_t m = 0; m < T.size(); ++m) detail::add_abs_square(T.raw(m), acc);
  const CycNum total = CycNum::from_full(F.p(), F.q(), acc, 2 * T.norm_exponent());
  auto r = total.as_rational();
  if (!r) throw std::logic_error("sum of squared Fourier magnitudes is not rational");
  return *r;
}

// Point-set text format: a header "q=<p^ell> n=<n>", then one point per line
// as n comma-separated element indices.

inline PointSet read_point_set(std::istream& in, std::uint64_t cap = kDefaultCap) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("point set: missing header");
  std::string qs, ns;
  {
    std::istringstream hs(line);
    std::string a, b, extra;
    if (!(hs >> a >> b) || (hs >> extra) || a.rfind("q=", 0) != 0 || b.rfind("n=", 0) != 0)
      throw std::invalid_argument("point set: malformed header '" + line + "'");
    qs = a.substr(2);
    ns = b.substr(2);
  }
  int n = 0;
  try {
    std::size_t pos = 0;
    n = std::stoi(ns, &pos);
    if (pos != ns.size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw std::invalid_argument("point set: malformed dimension '" + ns + "'");
  }
  Space S(parse_field(qs), n, cap);
  std::vector<std::uint64_t> codes;
  std::vector<std::uint32_t> pt;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    pt.clear();
    std::istringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) {
      try {
        std::size_t pos = 0;
        const long v = std::stol(tok, &pos);
        if (tok.find_first_not_of(" \t\r", pos) != std::string::npos || v < 0 || v >= static_cast<long>(S.field().q()))
          throw std::invalid_argument("");
        pt.push_back(static_cast<std::uint32_t>(v));
      } catch (const std::exception&) {
        throw std::invalid_argument("point set: bad coordinate '" + tok + "' on line " + std::to_string(lineno));
      }
    }
    if (static_cast<int>(pt.size()) != n)
      throw std::invalid_argument("point set: line " + std::to_string(lineno) + " has " + std::to_string(pt.size()) +
                                  " coordinates, expected " + std::to_string(n));
    codes.push_back(S.encode(pt));
  }
  const std::size_t raw = codes.size();
  PointSet E(S, std::move(codes));
  if (E.size() != raw) throw std::invalid_argument("point set: duplicate points");
  return E;
}

inline void write_point_set(std::ostream& out, const PointSet& E) {
  out << "q=" << E.field().designation() << " n=" << E.dim() << '\n';
  std::vector<std::uint32_t> x(static_cast<std::size_t>(E.dim()));
  for (auto c : E.codes()) {
    E.space().decode(c, x);
    for (std::size_t i = 0; i < x.size(); ++i) out << (i ? "," : "") << x[i];
    out << '\n';
  }
}

inline PointSet load_point_set(const std::string& path, std::uint64_t cap = kDefaultCap) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open point set file '" + path + "'");
  return read_point_set(in, cap);
}

inline void save_point_set(const std::string& path, const PointSet& E) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write point set file '" + path + "'");
  write_point_set(out, E);
}

}  // namespace ffphi
