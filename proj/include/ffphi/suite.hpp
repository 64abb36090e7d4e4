#pragma once

// Verification batteries and JSON-lines report records.

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffphi/counting.hpp"
#include "ffphi/cyclotomic.hpp"
#include "ffphi/field.hpp"
#include "ffphi/fourier.hpp"
#include "ffphi/isotropic.hpp"
#include "ffphi/varieties.hpp"

namespace ffphi {

using json = nlohmann::ordered_json;

enum class Verdict { pass, fail, vacuous, error };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::vacuous: return "vacuous";
    case Verdict::error: return "error";
  }
  return "?";
}

inline Verdict verdict_of(bool ok) { return ok ? Verdict::pass : Verdict::fail; }

struct ReportRecord {
  std::string id;       // unique within a run
  std::string command;  // command line that reproduces the record
  std::string check;    // what is being asserted
  json inputs = json::object();
  json results = json::object();
  Verdict verdict = Verdict::error;
  double wall_ms = 0;
  std::vector<std::string> ops;  // library operations exercised

  bool ok() const { return verdict == Verdict::pass || verdict == Verdict::vacuous; }

  json to_json() const {
    return json{{"id", id},         {"command", command}, {"check", check},   {"inputs", inputs},
                {"results", results}, {"verdict", to_string(verdict)}, {"wall_ms", wall_ms}, {"ops", ops}};
  }
};

struct ExperimentConfig {
  std::string battery;
  std::optional<std::string> field;  // "p^ell" or "q"
  std::optional<int> d;
  std::optional<int> n;
  std::optional<std::uint32_t> t;
  std::vector<std::uint64_t> sizes;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;
  std::uint64_t cap = kDefaultCap;
  std::optional<std::string> set_path;
  bool quick = false;
  bool brute = false;   // isotropic: run the exhaustive search
  bool verify = false;  // sharpness: run verify_null
};

using RecordSink = std::function<void(const ReportRecord&)>;

// JSON views of exact values.

inline json cyc_json(const CycNum& z) {
  const auto e = z.embed();
  json j{{"coeffs", z.coeffs()}, {"den_exp", z.den_exp()}};
  if (auto r = z.as_rational()) j["value"] = to_string(*r);
  std::ostringstream re, im;
  re.precision(12), im.precision(12);
  re << e.real(), im << e.imag();
  j["embedding"] = {re.str(), im.str()};
  return j;
}

inline json elems_json(const std::vector<Elem>& v) {
  json out = json::array();
  for (Elem e : v) out.push_back(e.index);
  return out;
}

inline json profile_json(const NuProfile& prof) {
  json counts = json::object();
  for (std::size_t t = 0; t < prof.counts.size(); ++t)
    if (prof.counts[t]) counts[std::to_string(t)] = std::to_string(*prof.counts[t]);
  return json{{"source", to_string(prof.source)}, {"set_size", prof.set_size}, {"nu", counts}};
}

/// Rows (m, coeffs, scale, embedding) of the normalized transform.
inline json fourier_table_json(const FourierTable& T) {
  json rows = json::array();
  for (std::uint64_t m = 0; m < T.size(); ++m) {
    const CycNum v = T.value(m);
    const auto e = T.normalized(m).embed();
    rows.push_back({{"m", T.space().decode(m)}, {"coeffs", v.coeffs()}, {"scale", "q^-" + std::to_string(T.norm_exponent())},
                    {"embedding", {e.real(), e.imag()}}});
  }
  return rows;
}

namespace detail {

/// Runs `body` under a timer and converts exceptions into error records.
inline void emit(const RecordSink& sink, ReportRecord rec, const std::function<void(ReportRecord&)>& body) {
  const auto start = std::chrono::steady_clock::now();
  try {
    body(rec);
  } catch (const BudgetExceeded& e) {
    rec.verdict = Verdict::error;
    rec.results = {{"error", "budget"}, {"message", e.what()}};
  } catch (const std::exception& e) {
    rec.verdict = Verdict::error;
    rec.results = {{"error", "exception"}, {"message", e.what()}};
  }
  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  sink(rec);
}

inline ReportRecord error_record(const std::string& id, const std::string& command, const std::string& kind,
                                 const std::string& message) {
  ReportRecord rec;
  rec.id = id;
  rec.command = command;
  rec.check = "configuration";
  rec.verdict = Verdict::error;
  rec.results = {{"error", kind}, {"message", message}};
  return rec;
}

inline std::uint64_t require_seed(const ExperimentConfig& cfg) {
  if (!cfg.seed) throw std::invalid_argument("battery '" + cfg.battery + "' is randomized and needs --seed");
  return *cfg.seed;
}

/// Fields named by the config, or the defaults when none is given.
inline std::vector<Field> fields_or(const ExperimentConfig& cfg, const std::vector<std::uint64_t>& defaults) {
  if (cfg.field) return {parse_field(*cfg.field)};
  std::vector<Field> out;
  for (auto q : defaults) out.push_back(parse_field(std::to_string(q)));
  return out;
}

inline std::string fq(const Field& F) { return std::to_string(F.q()); }

inline bool prime_power(std::uint64_t q) {
  for (std::uint64_t p = 3; p <= q; p += 2) {
    if (!is_prime(p) || q % p != 0) continue;
    while (q % p == 0) q /= p;
    return q == 1;
  }
  return false;
}

/// (E + v)^(m) = chi(-m . v) E^(m) at every frequency.
inline bool translation_law(const PointSet& E, const FourierTable& T, std::span<const std::uint32_t> v) {
  const Field& F = E.field();
  const FourierTable Tv = dft(translate(E, v));
  std::vector<std::uint32_t> m(static_cast<std::size_t>(E.dim()));
  for (std::uint64_t mc = 0; mc < T.size(); ++mc) {
    E.space().decode(mc, m);
    std::uint32_t dotv = 0;
    for (std::size_t i = 0; i < m.size(); ++i) dotv = F.addi(dotv, F.muli(m[i], v[i]));
    if (!(Tv.value(mc) == chi(F, F.neg(Elem{dotv})) * T.value(mc))) return false;
  }
  return true;
}

inline PointSet dilate(const PointSet& E, Elem lambda) {
  const Field& F = E.field();
  std::vector<std::uint64_t> codes;
  std::vector<std::uint32_t> x(static_cast<std::size_t>(E.dim()));
  for (auto c : E.codes()) {
    E.space().decode(c, x);
    for (auto& v : x) v = F.muli(v, lambda.index);
    codes.push_back(E.space().encode(x));
  }
  return PointSet(E.space(), std::move(codes));
}

/// Exact properties of a finite set and its transform: Plancherel, inversion,
/// the translation law, and conjugate symmetry.
inline json transform_properties(const PointSet& E, std::uint64_t seed, bool& ok) {
  const FourierTable T = dft(E);
  const Rational planch = plancherel_sum(T);
  const Rational expected = Rational(static_cast<long long>(E.size())) * q_power(E.field().q(), -E.dim());
  const bool inv = inversion_check(E, T);
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> v(static_cast<std::size_t>(E.dim()));
  for (auto& x : v) x = std::uniform_int_distribution<std::uint32_t>(0, E.field().q() - 1)(rng);
  const bool trans = translation_law(E, T, v);
  bool conj = true;
  std::vector<std::uint32_t> m;
  for (std::uint64_t mc = 0; mc < T.size() && conj; ++mc) {
    m = E.space().decode(mc);
    for (auto& x : m) x = E.field().negi(x);
    conj = T.value(E.space().encode(m)) == T.value(mc).conj();
  }
  ok = planch == expected && inv && trans && conj;
  return json{{"plancherel", to_string(planch)}, {"plancherel_expected", to_string(expected)}, {"inversion", inv},
              {"translation_law", trans}, {"translation", v}, {"conjugate_symmetry", conj}};
}

/// Sum over t of nu(t) equals |E|^2, and dilating E by every nonzero scalar
/// leaves the profile unchanged.
inline json count_properties(const PointSet& E, const NuProfile& prof, bool& ok) {
  std::uint64_t total = 0;
  for (const auto& c : prof.counts) total += c.value();
  const std::uint64_t n = E.size();
  bool dilation = true;
  for (std::uint32_t l = 2; l < E.field().q() && dilation; ++l)
    dilation = nu_brute_profile(dilate(E, Elem{l})).counts == prof.counts;
  ok = total == n * n && dilation;
  return json{{"nu_total", std::to_string(total)}, {"pairs", std::to_string(n * n)}, {"dilation_invariant", dilation}};
}

}  // namespace detail

// Batteries. Each emits one record per check. Without a field or dimension in
// the config a battery runs its default grid, with every optional
// verification enabled; an explicit configuration runs the search in
// `isotropic` only with --brute and the pair check in `sharpness` only with
// --verify.

inline void battery_gauss(const ExperimentConfig& cfg, const RecordSink& sink) {
  std::vector<std::uint64_t> qs;
  for (std::uint64_t q = 3; q <= 49; q += 2)
    if (detail::prime_power(q)) qs.push_back(q);
  for (const Field& F : detail::fields_or(cfg, qs)) {
    ReportRecord rec;
    rec.id = "gauss/q=" + detail::fq(F);
    rec.command = "gauss --q " + F.designation();
    rec.check = "G_1^2 = eta(-1) q exactly; complex value of G_1 matches the predicted sign";
    rec.inputs = {{"q", F.q()}, {"p", F.p()}, {"ell", F.ell()}, {"modulus", F.modulus()}};
    rec.ops = {"Field::make", "eta", "trace", "sqrt_minus_one", "sum_two_squares_minus_one", "chi", "gauss_sum",
               "verify_gauss_square", "CycNum::embed"};
    detail::emit(sink, rec, [&](ReportRecord& r) {
      const CycNum g = gauss_sum(F, F.one());
      const bool square = verify_gauss_square(F);
      const auto pred = gauss_sum_predicted(F);
      const double err = std::abs(g.embed() - pred);
      const auto i = sqrt_minus_one(F);
      const bool sqrt_ok = i.has_value() == (F.q() % 4 == 1);
      const auto [a, b] = sum_two_squares_minus_one(F);
      const bool two_sq = F.add(F.square(a), F.square(b)) == F.neg(F.one());
      bool eta_mult = true, trace_lin = true;
      for (std::uint32_t x = 0; x < F.q(); ++x)
        for (std::uint32_t y = 0; y < F.q(); ++y) {
          eta_mult = eta_mult && F.eta(F.mul(Elem{x}, Elem{y})) == F.eta(Elem{x}) * F.eta(Elem{y});
          trace_lin = trace_lin && F.trace(F.add(Elem{x}, Elem{y})) == (F.trace(Elem{x}) + F.trace(Elem{y})) % F.p();
        }
      r.results = {{"G_1", cyc_json(g)},
                   {"G_1_squared", cyc_json(g * g)},
                   {"eta_minus_one", F.eta(F.neg(F.one()))},
                   {"square_identity", square},
                   {"predicted", {pred.real(), pred.imag()}},
                   {"embedding_error_below_1e-9", err < 1e-9},
                   {"sqrt_minus_one", i ? json(i->index) : json(nullptr)},
                   {"two_squares", {a.index, b.index}},
                   {"eta_multiplicative", eta_mult},
                   {"trace_additive", trace_lin}};
      r.verdict = verdict_of(square && err < 1e-9 && sqrt_ok && two_sq && eta_mult && trace_lin);
    });
  }

  std::vector<std::uint64_t> cs_qs = cfg.quick ? std::vector<std::uint64_t>{3, 5, 7, 9} : std::vector<std::uint64_t>{3, 5, 7, 9, 11, 13};
  for (const Field& F : detail::fields_or(cfg, cs_qs)) {
    ReportRecord rec;
    rec.id = "completed-square/q=" + detail::fq(F);
    rec.command = "gauss --q " + F.designation();
    rec.check = "sum_s chi(a s^2 + b s) = eta(a) G_1 chi(b^2 / (-4a)) for all a != 0 and b";
    rec.inputs = {{"q", F.q()}};
    rec.ops = {"completed_square_sum", "orthogonality_sum"};
    detail::emit(sink, rec, [&](ReportRecord& r) {
      std::uint64_t pairs = 0;
      for (std::uint32_t a = 1; a < F.q(); ++a)
        for (std::uint32_t b = 0; b < F.q(); ++b, ++pairs) completed_square_sum(F, Elem{a}, Elem{b});
      // Orthogonality in F_q^2: the character sum is q^2 at beta = 0 and vanishes elsewhere.
      bool ortho = true;
      for (std::uint32_t b0 = 0; b0 < F.q() && F.q() <= 13; ++b0)
        for (std::uint32_t b1 = 0; b1 < F.q(); ++b1) {
          const Elem beta[2] = {Elem{b0}, Elem{b1}};
          const auto expect = (b0 == 0 && b1 == 0) ? CycNum::integer(F, static_cast<std::int64_t>(F.q() * F.q())) : CycNum(F);
          ortho = ortho && orthogonality_sum(F, beta) == expect;
        }
      r.results = {{"pairs_checked", pairs}, {"orthogonality", ortho}};
      r.verdict = verdict_of(ortho);
    });
  }
}

inline void battery_sphere_ft(const ExperimentConfig& cfg, const RecordSink& sink) {
  std::vector<std::pair<int, std::uint64_t>> grid =
      cfg.quick ? std::vector<std::pair<int, std::uint64_t>>{{2, 3}, {3, 3}, {4, 3}, {3, 5}}
                : std::vector<std::pair<int, std::uint64_t>>{{2, 3}, {2, 5}, {2, 7}, {4, 3}, {4, 5}, {6, 3},
                                                             {3, 3}, {3, 5}, {3, 7}, {5, 3}};
  if (cfg.field || cfg.n) {
    const Field F = cfg.field ? parse_field(*cfg.field) : Field::make(3);
    grid = {{cfg.n.value_or(2), F.q()}};
  }
  const std::uint64_t seed = cfg.seed.value_or(1);
  for (auto [n, q] : grid) {
    const Field F = cfg.field ? parse_field(*cfg.field) : parse_field(std::to_string(q));
    ReportRecord rec;
    rec.id = "sphere-ft/q=" + detail::fq(F) + "/n=" + std::to_string(n);
    rec.command = "sphere-ft --q " + F.designation() + " --n " + std::to_string(n);
    rec.check = "zero-sphere transform: DFT = Gauss-sum closed form = case analysis, at every frequency";
    rec.inputs = {{"q", F.q()}, {"n", n}};
    rec.ops = {"zero_sphere", "dft", "s0_ft_closed", "verify_s0_ft", "plancherel_sum", "inversion_check"};
    detail::emit(sink, rec, [&](ReportRecord& r) {
      const S0Verification v = verify_s0_ft(F, n, cfg.cap);
      const PointSet S0 = zero_sphere(F, n, cfg.cap);
      bool props = true;
      const json pj = detail::transform_properties(S0, seed, props);
      // Two models of F_q (when there is a choice) give the same sphere size.
      json moduli = nullptr;
      bool model_ok = true;
      if (F.ell() > 1) {
        std::vector<int> other = F.modulus();
        for (std::uint64_t code = 0;; ++code) {
          const auto cand = detail::monic_from_code(code, F.ell(), F.p());
          if (cand != F.modulus() && detail::is_irreducible(cand, F.p())) {
            other = cand;
            break;
          }
        }
        const Field G = Field::with_modulus(F.p(), other);
        const std::size_t other_size = zero_sphere(G, n, cfg.cap).size();
        model_ok = other_size == S0.size();
        moduli = {{"modulus", F.modulus()}, {"other_modulus", other}, {"other_sphere_size", other_size}};
      }
      const std::vector<std::uint32_t> origin(static_cast<std::size_t>(n), 0);
      const bool origin_ok = s0_ft_closed(F, n, origin) == dft(S0, cfg.cap).normalized(0);
      r.results = {{"case", v.case_tag},     {"frequencies", v.frequencies},     {"sphere_size", v.sphere_size},
                   {"closed_matches_dft", v.closed_matches_dft}, {"case_matches_closed", v.case_matches_closed},
                   {"properties", pj},       {"models", moduli}};
      if (v.counterexample) r.results["counterexample_m"] = S0.space().decode(*v.counterexample);
      r.results["origin_value_matches"] = origin_ok;
      r.verdict = verdict_of(v.pass && props && model_ok && origin_ok);
    });
  }
}

inline void battery_rt_ft(const ExperimentConfig& cfg, const RecordSink& sink) {
  std::vector<std::pair<int, std::uint64_t>> grid =
      cfg.quick ? std::vector<std::pair<int, std::uint64_t>>{{4, 3}, {4, 5}}
                : std::vector<std::pair<int, std::uint64_t>>{{4, 3}, {4, 5}, {4, 7}, {6, 3}};
  if (cfg.field || cfg.d) {
    const Field F = cfg.field ? parse_field(*cfg.field) : Field::make(3);
    grid = {{cfg.d.value_or(4), F.q()}};
  }
  for (auto [d, q] : grid) {
    const Field F = cfg.field ? parse_field(*cfg.field) : parse_field(std::to_string(q));
    ReportRecord rec;
    rec.id = "rt-ft/q=" + detail::fq(F) + "/d=" + std::to_string(d);
    rec.command = "rt-ft --q " + F.designation() + " --d " + std::to_string(d);
    rec.check = "ratio-sphere transform: DFT = closed form for all t != 0 and all m; level sets partition F_q^d";
    rec.inputs = {{"q", F.q()}, {"d", d}};
    rec.ops = {"phi", "ratio_sphere", "rt_ft_closed", "verify_rt_ft"};
    detail::emit(sink, rec, [&](ReportRecord& r) {
      const RtVerification v = verify_rt_ft(F, d, cfg.cap);
      std::uint64_t total = 0;
      bool nonempty = true;
      for (auto s : v.sphere_sizes) total += s, nonempty = nonempty && s > 0;
      const Space S(F, d, cfg.cap);
      const PointSet R1 = ratio_sphere(F, d, F.one(), cfg.cap);
      const std::vector<Elem> zero(static_cast<std::size_t>(d), F.zero());
      std::vector<Elem> x;
      for (auto c : S.decode(R1.codes().front())) x.push_back(Elem{c});
      const bool phi_ok = phi(F, x, zero) == F.one();
      const std::vector<std::uint32_t> m0(static_cast<std::size_t>(d), 0);
      const bool origin_ok = rt_ft_closed(F, d, F.one(), m0) == dft(R1, cfg.cap).normalized(0);
      r.results = {{"comparisons", v.comparisons}, {"sphere_sizes", v.sphere_sizes}, {"partition", total == S.size()},
                   {"every_level_nonempty", nonempty}, {"closed_form_matches", v.pass},
                   {"phi_on_level_set", phi_ok}, {"origin_value_matches", origin_ok}};
      if (v.counterexample)
        r.results["counterexample"] = {{"t", v.counterexample->first}, {"m", S.decode(v.counterexample->second)}};
      r.verdict = verdict_of(v.pass && total == S.size() && nonempty && R1.size() == v.sphere_sizes[1] && phi_ok && origin_ok);
    });
  }
}

inline void battery_nu_cross(const ExperimentConfig& cfg, const RecordSink& sink) {
  struct Config {
    std::uint64_t q;
    int d;
    std::uint64_t size;
  };
  std::vector<Config> grid;
  if (cfg.quick) {
    grid = {{3, 4, 5}, {3, 4, 20}, {5, 4, 25}, {3, 6, 20}};
  } else {
    for (std::uint64_t q : {3, 5, 7})
      for (std::uint64_t s : {std::uint64_t{5}, std::uint64_t{20}, q * q}) grid.push_back({q, 4, s});
    for (int d : {6, 8})
      for (std::uint64_t s : {20, 100}) grid.push_back({3, d, s});
  }
  if (cfg.field || cfg.d || !cfg.sizes.empty()) {
    const Field F = cfg.field ? parse_field(*cfg.field) : Field::make(3);
    const int d = cfg.d.value_or(4);
    std::vector<std::uint64_t> sizes = cfg.sizes;
    if (sizes.empty()) sizes = {5, 20, F.q() * F.q()};
    grid.clear();
    for (auto s : sizes) grid.push_back({F.q(), d, s});
  }
  const std::uint64_t seed = detail::require_seed(cfg);
  const std::uint64_t samples = cfg.samples.value_or(cfg.quick ? 5 : 20);
  for (const auto& c : grid) {
    const Field F = cfg.field ? parse_field(*cfg.field) : parse_field(std::to_string(c.q));
    ReportRecord rec;
    rec.id = "nu-cross/q=" + detail::fq(F) + "/d=" + std::to_string(c.d) + "/size=" + std::to_string(c.size);
    rec.command = "nu-cross --q " + F.designation() + " --d " + std::to_string(c.d) + " --sizes " + std::to_string(c.size) +
                  " --samples " + std::to_string(samples) + " --seed " + std::to_string(seed);
    rec.check = "Fourier count = pair count for every t != 0; counts sum to |E|^2; profile is dilation invariant; "
                "adding a point never lowers a count";
    rec.inputs = {{"q", F.q()}, {"d", c.d}, {"size", c.size}, {"samples", samples}, {"seed", seed}};
    rec.ops = {"nu_brute", "nu_fourier", "phi_image", "dft", "plancherel_sum", "inversion_check"};
    detail::emit(sink, rec, [&](ReportRecord& r) {
      const Space S(F, c.d, cfg.cap);
      std::mt19937_64 rng(seed ^ (c.q * 1000003 + static_cast<std::uint64_t>(c.d) * 101 + c.size));
      std::uint64_t agree = 0, comparisons = 0, props_ok = 0, monotone_ok = 0, transform_ok = 0;
      json first_failure = nullptr;
      for (std::uint64_t i = 0; i < samples; ++i) {
        const PointSet E = random_subset(S, c.size, rng);
        const NuProfile b = nu_brute_profile(E);
        const FourierCounter fc(E, cfg.cap);
        bool same = true;
        for (std::uint32_t t = 1; t < F.q(); ++t, ++comparisons) same = same && fc.nu(Elem{t}) == b.counts[t].value();
        if (nu_brute(E, F.one()) != b.counts[1].value() || nu_fourier(E, F.one(), cfg.cap) != b.counts[1].value())
          same = false;
        bool props = false;
        const json pj = detail::count_properties(E, b, props);
        // Monotonicity: add the smallest code outside E.
        bool monotone = true;
        if (E.size() < S.size()) {
          std::vector<std::uint64_t> codes(E.codes().begin(), E.codes().end());
          std::uint64_t extra = 0;
          while (E.contains(extra)) ++extra;
          codes.push_back(extra);
          const NuProfile b2 = nu_brute_profile(PointSet(S, std::move(codes)));
          for (std::size_t t = 0; t < b.counts.size(); ++t) monotone = monotone && b2.counts[t] >= b.counts[t];
        }
        bool tprops = true;
        if (i == 0 && S.size() * E.size() <= 2'000'000) detail::transform_properties(E, seed + i, tprops);
        const auto image = phi_image(E);
        const bool image_ok = image.size() == static_cast<std::size_t>(1 + std::count_if(b.counts.begin() + 1, b.counts.end(),
                                                                                       [](auto& v) { return *v > 0; }));
        agree += same;
        props_ok += props && image_ok;
        monotone_ok += monotone;
        transform_ok += tprops;
        if ((!same || !props || !monotone || !tprops || !image_ok) && first_failure.is_null())
          first_failure = {{"sample", i}, {"points", E.codes()}, {"brute", profile_json(b)}, {"properties", pj}};
      }
      r.results = {{"sets", samples},           {"comparisons", comparisons}, {"agreeing_sets", agree},
                   {"property_sets", props_ok}, {"monotone_sets", monotone_ok}, {"transform_property_sets", transform_ok}};
      if (!first_failure.is_null()) r.results["first_failure"] = first_failure;
      r.verdict = verdict_of(agree == samples && props_ok == samples && monotone_ok == samples && transform_ok == samples);
    });
  }
}

inline void battery_coverage(const ExperimentConfig& cfg, const RecordSink& sink) {
  const std::uint64_t seed = detail::require_seed(cfg);
  const std::uint64_t samples = cfg.samples.value_or(cfg.quick ? 20 : 100);
  const std::vector<std::uint64_t> qs = cfg.quick ? std::vector<std::uint64_t>{3, 7} : std::vector<std::uint64_t>{3, 7, 11};
  for (const Field& F : detail::fields_or(cfg, qs)) {
    const std::uint64_t q = F.q();
    const std::uint64_t size = cfg.sizes.empty() ? q * q + 1 : cfg.sizes.front();
    ReportRecord rec;
    rec.id = "theorem-1.2/q=" + detail::fq(F) + "/size=" + std::to_string(size);
    rec.command = "theorem-1.2 --q " + F.designation() + " --samples " + std::to_string(samples) + " --seed " + std::to_string(seed);
    rec.check = "every random E in F_q^4 with |E| > q^2 has phi(E, E) = F_q and min_{t != 0} nu(t) >= (1/q + 1/q^2)|E|(|E| - q^2)";
    rec.inputs = {{"q", q}, {"d", 4}, {"size", size}, {"samples", samples}, {"seed", seed}};
    rec.ops = {"nu_fourier", "lower_bound_d4", "threshold_experiment"};
    detail::emit(sink, rec, [&](ReportRecord& r) {
      const Rational bound = lower_bound_d4(size, q);
      const ThresholdReport rep = threshold_experiment(F, 4, {size}, samples, seed, {}, NuMethod::fourier, cfg.cap);
      const ThresholdRow& row = rep.rows.front();
      const bool bound_ok = Rational(static_cast<long long>(row.min_nu_low)) >= bound;
      r.results = {{"covered", row.covered},
                   {"min_nu_low", std::to_string(row.min_nu_low)},
                   {"min_nu_high", std::to_string(row.min_nu_high)},
                   {"min_nu_mean", to_string(row.min_nu_mean)},
                   {"bound", to_string(bound)},
                   {"bound_respected", bound_ok}};
      if (size <= q * q) {
        r.verdict = Verdict::vacuous;  // no claim below the threshold
      } else {
        r.verdict = verdict_of(row.covered == samples && bound_ok);
      }
    });
  }

  // The threshold is sharp for q = 3 mod 4: a planted F_q^2 x {0} of size q^2 has image {0}.
  const std::uint64_t pq = cfg.field ? parse_field(*cfg.field).q() : 3;
  if (pq % 4 == 3) {
    const Field F = parse_field(std::to_string(pq));
    ReportRecord rec;
    rec.id = "theorem-1.2/threshold/q=" + detail::fq(F);
    rec.command = "threshold --q " + F.designation() + " --d 4 --sizes " + std::to_string(pq * pq) + "," +
                  std::to_string(pq * pq + 1) + "," + std::to_string(pq * pq * pq) + " --samples " + std::to_string(samples) +
                  " --seed " + std::to_string(seed);
    rec.check = "size q^2 + 1 always covers F_q; the planted set F_q^2 x {0} of size q^2 has image {0}";
    rec.inputs = {{"q", pq}, {"d", 4}, {"sizes", {pq * pq, pq * pq + 1, pq * pq * pq}}, {"samples", samples}, {"seed", seed}};
    rec.ops = {"threshold_experiment", "sharpness_set", "phi_image", "lower_bound_d4"};
    detail::emit(sink, rec, [&](ReportRecord& r) {
      const SharpnessSet planted = sharpness_set(F, 4, cfg.cap);
      const ThresholdReport rep =
          threshold_experiment(F, 4, {pq * pq, pq * pq + 1, pq * pq * pq}, samples, seed, {planted.set}, NuMethod::automatic, cfg.cap);
      json rows = json::array();
      for (const auto& row : rep.rows)
        rows.push_back({{"size", row.size}, {"covered", row.covered}, {"samples", row.samples},
                        {"min_nu_low", std::to_string(row.min_nu_low)}, {"min_nu_mean", to_string(row.min_nu_mean)}});
      const auto& img = rep.planted.front().image;
      r.results = {{"rows", rows},
                   {"planted_size", rep.planted.front().size},
                   {"planted_image", elems_json(img)},
                   {"bound_at_q_squared", to_string(lower_bound_d4(pq * pq, pq))}};
      r.verdict = verdict_of(rep.rows[1].covered == samples && img.size() == 1 && img.front() == F.zero() &&
                             lower_bound_d4(pq * pq, pq) == 0);
    });
  }
}

inline void battery_bounds(const ExperimentConfig& cfg, const RecordSink& sink) {
  const std::uint64_t seed = detail::require_seed(cfg);
  const std::uint64_t samples = cfg.samples.value_or(cfg.quick ? 2 : 5);
  struct Config {
    std::uint64_t q;
    int d;
    std::uint64_t size;
    bool constructed;
  };
  std::vector<Config> grid;
  if (cfg.field || cfg.d) {
    const Field F = cfg.field ? parse_field(*cfg.field) : Field::make(3);
    const int d = cfg.d.value_or(6);
    std::vector<std::uint64_t> sizes = cfg.sizes;
    if (sizes.empty()) sizes = {*detail::checked_pow(F.q(), (3 * d - 2) / 4)};
    for (auto s : sizes) grid.push_back({F.q(), d, s, false});
  } else {
    grid = {{3, 8, 729, false}, {3, 8, 729, true}, {3, 6, 81, false}, {3, 6, 81, true}, {3, 6, 500, false}};
    if (!cfg.quick) grid.push_back({3, 6, 600, false});
  }

  for (const auto& c : grid) {
    const Field F = cfg.field ? parse_field(*cfg.field) : parse_field(std::to_string(c.q));
    const BoundCase bc = c.d % 4 == 2 ? BoundCase::d2mod4
                         : (c.d % 8 == 4 && c.q % 4 == 3 && c.d >= 12) ? BoundCase::d4mod8_q3mod4
                                                                        : BoundCase::d0mod4;
    ReportRecord rec;
    rec.id = "theorem-1.3-bounds/q=" + detail::fq(F) + "/d=" + std::to_string(c.d) + "/size=" + std::to_string(c.size) +
             (c.constructed ? "/constructed" : "/random");
    rec.command = "theorem-1.3-bounds --q " + F.designation() + " --d " + std::to_string(c.d) + " --sizes " +
                  std::to_string(c.size) + " --samples " + std::to_string(samples) + " --seed " + std::to_string(seed);
    rec.check = "min_{t != 0} nu(t) >= displayed lower bound for case '" + std::string(to_string(bc)) +
                "'; nonpositive bound is vacuous";
    rec.inputs = {{"q", F.q()}, {"d", c.d}, {"size", c.size}, {"case", to_string(bc)},
                  {"set", c.constructed ? "constructed" : "random"}, {"seed", seed}};
    rec.ops = {"lower_bound_general", "nu_brute", "nu_fourier", "sharpness_set"};
    detail::emit(sink, rec, [&](ReportRecord& r) {
      const Rational bound = lower_bound_general(c.size, F.q(), c.d, bc);
      std::vector<PointSet> sets;
      if (c.constructed) {
        SharpnessSet s = sharpness_set(F, c.d, cfg.cap);
        if (s.set.size() != c.size)
          throw std::invalid_argument("constructed set has size " + std::to_string(s.set.size()) + ", not " + std::to_string(c.size));
        sets.push_back(std::move(s.set));
      } else {
        const Space S(F, c.d, cfg.cap);
        std::mt19937_64 rng(seed ^ (c.size * 7919 + static_cast<std::uint64_t>(c.d)));
        for (std::uint64_t i = 0; i < samples; ++i) sets.push_back(random_subset(S, c.size, rng));
      }
      json mins = json::array();
      bool holds = true;
      for (const auto& E : sets) {
        const NuProfile prof = nu_profile(E, NuMethod::both, kDefaultPairBudget, cfg.cap);
        const std::uint64_t mn = prof.min_nonzero();
        mins.push_back(std::to_string(mn));
        holds = holds && Rational(static_cast<long long>(mn)) >= bound;
      }
      r.results = {{"bound", to_string(bound)}, {"bound_positive", bound > 0}, {"min_nu", mins}, {"inequality_holds", holds}};
      r.verdict = bound > 0 ? verdict_of(holds) : Verdict::vacuous;
    });
  }

  if (!cfg.field && !cfg.d) {
    // Case A at d = 12, q = 3: the bound at the extremal size, evaluated arithmetically.
    ReportRecord rec;
    rec.id = "theorem-1.3-bounds/q=3/d=12/size=6561/arithmetic";
    rec.command = "theorem-1.3-bounds --q 3 --d 12 --sizes 6561 --seed " + std::to_string(seed);
    rec.check = "case 'd=4 mod 8, q=3 mod 4' bound at |E| = q^((3d-4)/4); the extremal set has image {0}";
    rec.inputs = {{"q", 3}, {"d", 12}, {"size", 6561}, {"case", to_string(BoundCase::d4mod8_q3mod4)}};
    rec.ops = {"lower_bound_general", "sharpness_set", "verify_null"};
    detail::emit(sink, rec, [&](ReportRecord& r) {
      const Rational bound = lower_bound_general(6561, 3, 12, BoundCase::d4mod8_q3mod4);
      // Smallest size at which the bound turns positive.
      std::uint64_t lo = 1, hi = *detail::checked_pow(3, 12);
      while (lo < hi) {
        const std::uint64_t mid = (lo + hi) / 2;
        if (lower_bound_general(mid, 3, 12, BoundCase::d4mod8_q3mod4) > 0) hi = mid; else lo = mid + 1;
      }
      r.results = {{"bound", to_string(bound)}, {"bound_positive", bound > 0}, {"first_positive_size", lo}};
      r.verdict = bound > 0 ? Verdict::fail : Verdict::vacuous;  // positive would contradict the extremal set
    });
  }
}

inline void battery_sharpness(const ExperimentConfig& cfg, const RecordSink& sink) {
  std::vector<std::pair<int, std::uint64_t>> grid =
      cfg.quick ? std::vector<std::pair<int, std::uint64_t>>{{4, 3}, {4, 5}, {6, 3}, {8, 3}}
                : std::vector<std::pair<int, std::uint64_t>>{{4, 3}, {4, 7}, {4, 5}, {4, 13}, {12, 3},
                                                             {8, 3}, {8, 5}, {6, 3}, {6, 5}, {10, 3}};
  const bool explicit_config = cfg.field || cfg.d;
  if (explicit_config) {
    const Field F = cfg.field ? parse_field(*cfg.field) : Field::make(3);
    grid = {{cfg.d.value_or(4), F.q()}};
  }
  const bool verify = cfg.verify || !explicit_config;
  const std::uint64_t seed = cfg.seed.value_or(1);
  for (auto [d, q] : grid) {
    const Field F = cfg.field ? parse_field(*cfg.field) : parse_field(std::to_string(q));
    ReportRecord rec;
    rec.id = "sharpness/q=" + detail::fq(F) + "/d=" + std::to_string(d);
    rec.command = "sharpness --q " + F.designation() + " --d " + std::to_string(d) + (verify ? " --verify" : "");
    rec.check = verify ? "constructed set has the stated size and phi(E, E) = {0}" : "constructed set has the stated size";
    rec.inputs = {{"q", F.q()}, {"d", d}};
    rec.ops = {"sharpness_set", "verify_null", "max_isotropic_construct"};
    detail::emit(sink, rec, [&](ReportRecord& r) {
      const SharpnessSet s = sharpness_set(F, d, cfg.cap);
      json basis = json::array();
      for (const auto& b : s.subspace.vectors()) basis.push_back(b);
      r.results = {{"family", s.family},
                   {"size_formula", s.size_formula},
                   {"expected_size", s.expected_size},
                   {"size", s.set.size()},
                   {"subspace_basis", basis},
                   {"gram_certificate", s.subspace.certified()}};
      bool ok = s.set.size() == s.expected_size && s.subspace.certified();
      if (verify) {
        const NullVerification v = verify_null(s, 10'000'000, 500, seed);
        r.results["algebraic_tier"] = v.algebraic_pass;
        r.results["enumeration"] = v.brute_ran ? "all pairs" : "subsample";
        r.results["enumerated_points"] = v.sample_size;
        r.results["image"] = elems_json(v.image);
        ok = ok && v.pass();
      }
      r.verdict = verdict_of(ok);
    });
  }
}

inline void battery_isotropic(const ExperimentConfig& cfg, const RecordSink& sink) {
  std::vector<std::pair<int, std::uint64_t>> grid;
  const bool explicit_config = cfg.field || cfg.n;
  if (explicit_config) {
    const Field F = cfg.field ? parse_field(*cfg.field) : Field::make(3);
    grid = {{cfg.n.value_or(4), F.q()}};
  } else {
    for (std::uint64_t q : cfg.quick ? std::vector<std::uint64_t>{3, 5} : std::vector<std::uint64_t>{3, 5, 7})
      for (int n = 2; n <= (cfg.quick ? 4 : 5); ++n) grid.push_back({n, q});
    if (!cfg.quick) grid.push_back({6, 3});
  }
  const bool brute = cfg.brute || !explicit_config;
  for (auto [n, q] : grid) {
    const Field F = cfg.field ? parse_field(*cfg.field) : parse_field(std::to_string(q));
    ReportRecord rec;
    rec.id = "isotropic/q=" + detail::fq(F) + "/n=" + std::to_string(n);
    rec.command = "isotropic --q " + F.designation() + " --n " + std::to_string(n) + (brute ? " --brute" : "");
    rec.check = "constructed totally isotropic subspace is certified, has the maximal dimension, and matches exhaustive search";
    rec.inputs = {{"q", F.q()}, {"n", n}};
    rec.ops = {"max_isotropic_construct", "max_isotropic_brute"};
    detail::emit(sink, rec, [&](ReportRecord& r) {
      const SubspaceBasis H = max_isotropic_construct(F, n);
      const int predicted = max_isotropic_dimension(F, n);
      // (eta(-1))^(n/2) = 1 exactly when q = 1 mod 4 or n = 0 mod 4.
      const bool residue_ok = n % 2 == 1 || ((F.q() % 4 == 1 || n % 4 == 0) == (predicted == n / 2));
      json basis = json::array();
      for (const auto& b : H.vectors()) basis.push_back(b);
      r.results = {{"dimension", H.dim()},
                   {"predicted_dimension", predicted},
                   {"span_size", H.span_size()},
                   {"basis", basis},
                   {"gram_certificate", H.certified()},
                   {"residue_classification", residue_ok}};
      bool ok = H.certified() && H.dim() == predicted && residue_ok;
      if (brute) {
        const int b = max_isotropic_brute(F, n, cfg.cap);
        r.results["brute_dimension"] = b;
        ok = ok && b == H.dim();
      }
      r.verdict = verdict_of(ok);
    });
  }
}

inline const std::vector<std::string>& battery_names() {
  static const std::vector<std::string> names{"gauss",      "sphere-ft",          "rt-ft",     "nu-cross",
                                              "theorem-1.2", "theorem-1.3-bounds", "sharpness", "isotropic"};
  return names;
}

/// Runs one battery, or all of them for "suite". Returns true iff every
/// emitted record is pass or vacuous.
inline bool run_suite(const ExperimentConfig& cfg, const RecordSink& sink) {
  bool ok = true;
  const RecordSink tracking = [&](const ReportRecord& r) {
    ok = ok && r.ok();
    sink(r);
  };
  std::vector<std::string> names;
  if (cfg.battery == "suite") {
    names = battery_names();
  } else if (std::find(battery_names().begin(), battery_names().end(), cfg.battery) != battery_names().end()) {
    names = {cfg.battery};
  } else {
    tracking(detail::error_record("suite/" + cfg.battery, cfg.battery, "unknown-battery",
                                  "unknown battery '" + cfg.battery + "'"));
    return false;
  }
  for (const auto& name : names) {
    ExperimentConfig c = cfg;
    if (cfg.battery != "suite") c.battery = name;
    try {
      if (name == "gauss") battery_gauss(c, tracking);
      else if (name == "sphere-ft") battery_sphere_ft(c, tracking);
      else if (name == "rt-ft") battery_rt_ft(c, tracking);
      else if (name == "nu-cross") battery_nu_cross(c, tracking);
      else if (name == "theorem-1.2") battery_coverage(c, tracking);
      else if (name == "theorem-1.3-bounds") battery_bounds(c, tracking);
      else if (name == "sharpness") battery_sharpness(c, tracking);
      else if (name == "isotropic") battery_isotropic(c, tracking);
    } catch (const BudgetExceeded& e) {
      tracking(detail::error_record(name + "/config", name, "budget", e.what()));
    } catch (const std::exception& e) {
      tracking(detail::error_record(name + "/config", name, "invalid-config", e.what()));
    }
  }
  return ok;
}

/// Every library operation that the default suite is expected to exercise.
inline const std::set<std::string>& expected_ops() {
  static const std::set<std::string> ops{
      "Field::make",       "eta",           "trace",          "sqrt_minus_one", "sum_two_squares_minus_one",
      "chi",               "orthogonality_sum", "gauss_sum",   "verify_gauss_square", "completed_square_sum",
      "CycNum::embed",     "dft",           "inversion_check", "plancherel_sum", "phi",
      "zero_sphere",       "ratio_sphere",  "s0_ft_closed",   "verify_s0_ft",   "rt_ft_closed",
      "verify_rt_ft",      "nu_brute",      "nu_fourier",     "phi_image",      "lower_bound_d4",
      "lower_bound_general", "threshold_experiment", "max_isotropic_construct", "max_isotropic_brute",
      "sharpness_set",     "verify_null"};
  return ops;
}

}  // namespace ffphi
