#include <gtest/gtest.h>

#include <random>

#include "ffphi/counting.hpp"

using namespace ffphi;

namespace {

// Pair count with phi evaluated by plain modular arithmetic; prime fields only.
std::vector<std::uint64_t> naive_nu(const PointSet& E) {
  const auto p = static_cast<std::int64_t>(E.field().q());
  const int d = E.dim(), h = d / 2;
  auto inv = [&](std::int64_t a) {
    for (std::int64_t b = 1; b < p; ++b)
      if (a * b % p == 1) return b;
    return std::int64_t{0};
  };
  std::vector<std::uint64_t> nu(static_cast<std::size_t>(p), 0);
  const auto pts = E.coordinates();
  for (std::size_t i = 0; i < E.size(); ++i)
    for (std::size_t j = 0; j < E.size(); ++j) {
      std::int64_t a = 0, b = 0;
      for (int k = 0; k < d; ++k) {
        const std::int64_t u = (static_cast<std::int64_t>(pts[i * d + k]) - pts[j * d + k] + p) % p;
        (k < h ? a : b) += u * u;
      }
      a %= p, b %= p;
      ++nu[static_cast<std::size_t>(b == 0 ? 0 : a * inv(b) % p)];
    }
  return nu;
}

PointSet plane_times_zero(const Field& F) {
  const Space S(F, 4);
  std::vector<std::uint64_t> codes;
  for (std::uint32_t a = 0; a < F.q(); ++a)
    for (std::uint32_t b = 0; b < F.q(); ++b) codes.push_back(S.encode(std::vector<std::uint32_t>{a, b, 0, 0}));
  return PointSet(S, codes);
}

}  // namespace

TEST(NuBrute, Singleton) {
  const Field F = Field::make(5);
  const PointSet E(Space(F, 4), {123});
  const auto prof = nu_brute_profile(E);
  EXPECT_EQ(prof.counts[0], 1u);
  for (std::uint32_t t = 1; t < 5; ++t) EXPECT_EQ(prof.counts[t], 0u);
}

TEST(NuBrute, PlaneTimesZeroHasImageZero) {
  const PointSet E = plane_times_zero(Field::make(3));
  EXPECT_EQ(nu_brute(E, Elem{0}), 81u);
  EXPECT_EQ(nu_brute(E, Elem{1}), 0u);
  EXPECT_EQ(nu_brute(E, Elem{2}), 0u);
  EXPECT_EQ(nu_fourier(E, Elem{1}), 0u);
  EXPECT_EQ(phi_image(E), std::vector<Elem>{Elem{0}});
}

TEST(NuBrute, MatchesModularArithmetic) {
  std::mt19937_64 rng(11);
  for (int q : {3, 5, 7})
    for (int d : {2, 4, 6}) {
      if (q > 3 && d == 6) continue;
      const PointSet E = random_subset(Space(Field::make(q), d), d == 2 ? 7 : 15, rng);
      const auto prof = nu_brute_profile(E);
      const auto ref = naive_nu(E);
      for (std::size_t t = 0; t < ref.size(); ++t) EXPECT_EQ(prof.counts[t], ref[t]);
    }
}

TEST(NuBrute, RespectsBudget) {
  const PointSet E = PointSet::full(Space(Field::make(3), 4));
  EXPECT_THROW(nu_brute_profile(E, 1000), BudgetExceeded);
  EXPECT_THROW(nu_brute_profile(PointSet::full(Space(Field::make(3), 3))), std::invalid_argument);
}

TEST(NuFourier, FullSpace) {
  const PointSet E = PointSet::full(Space(Field::make(3), 4));
  EXPECT_EQ(nu_fourier(E, Elem{1}), 2592u);
  EXPECT_EQ(nu_brute(E, Elem{1}), 2592u);
  EXPECT_THROW(nu_fourier(E, Elem{0}), std::invalid_argument);
}

TEST(NuFourier, EqualsBruteOnRandomSets) {
  struct Config {
    int q, d;
    std::uint64_t size;
  };
  std::vector<Config> grid;
  for (int q : {3, 5, 7})
    for (std::uint64_t s : {std::uint64_t{5}, std::uint64_t{20}, static_cast<std::uint64_t>(q * q)}) grid.push_back({q, 4, s});
  grid.push_back({3, 4, 50});
  grid.push_back({3, 6, 20});
  grid.push_back({3, 8, 20});
  grid.push_back({9, 4, 30});
  for (const auto& c : grid) {
    const Field F = parse_field(std::to_string(c.q));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      std::mt19937_64 rng(seed);
      const PointSet E = random_subset(Space(F, c.d), c.size, rng);
      const auto b = nu_brute_profile(E);
      const FourierCounter fc(E);
      for (std::uint32_t t = 1; t < F.q(); ++t)
        ASSERT_EQ(fc.nu(Elem{t}), b.counts[t].value()) << c.q << " " << c.d << " " << c.size << " seed " << seed;
    }
  }
}

TEST(NuProfile, SumsToPairCountAndIsMonotone) {
  std::mt19937_64 rng(3);
  const Space S(Field::make(5), 4);
  for (int rep = 0; rep < 10; ++rep) {
    const PointSet E = random_subset(S, 30, rng);
    const auto prof = nu_brute_profile(E);
    std::uint64_t total = 0;
    for (auto c : prof.counts) total += c.value();
    EXPECT_EQ(total, 900u);
    std::vector<std::uint64_t> codes(E.codes().begin(), E.codes().end());
    std::uint64_t extra = 0;
    while (E.contains(extra)) ++extra;
    codes.push_back(extra);
    const auto bigger = nu_brute_profile(PointSet(S, codes));
    for (std::size_t t = 0; t < prof.counts.size(); ++t) EXPECT_GE(bigger.counts[t], prof.counts[t]);
  }
}

TEST(NuProfile, MethodsAgree) {
  std::mt19937_64 rng(9);
  const PointSet E = random_subset(Space(Field::make(7), 4), 40, rng);
  const auto a = nu_profile(E, NuMethod::brute);
  const auto f = nu_profile(E, NuMethod::fourier);
  EXPECT_EQ(nu_profile(E, NuMethod::both).counts, a.counts);
  EXPECT_EQ(f.source, NuSource::fourier);
  EXPECT_FALSE(f.counts[0].has_value());
  for (std::size_t t = 1; t < 7; ++t) EXPECT_EQ(f.counts[t], a.counts[t]);
  EXPECT_EQ(f.min_nonzero(), a.min_nonzero());
}

TEST(Bounds, D4Values) {
  EXPECT_EQ(lower_bound_d4(9, 3), Rational(0));
  EXPECT_EQ(lower_bound_d4(10, 3), Rational(40, 9));
  EXPECT_EQ(lower_bound_d4(12, 3), Rational(16));
  EXPECT_THROW(lower_bound_d4(30, 5), std::invalid_argument);
}

TEST(Bounds, D4HoldsOnRandomSets) {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    const PointSet E = random_subset(Space(Field::make(3), 4), 12, rng);
    EXPECT_GE(Rational(static_cast<long long>(nu_brute_profile(E).min_nonzero())), Rational(16));
  }
}

TEST(Bounds, GeneralCases) {
  // d = 8, q = 3, |E| = 729: 729^2/3 - 4 * 729^2/9 - 4 * 3^5 * 729
  EXPECT_EQ(lower_bound_general(729, 3, 8, BoundCase::d0mod4), Rational(177147 - 236196 - 708588));
  EXPECT_EQ(lower_bound_general(81, 3, 6, BoundCase::d2mod4), Rational(2187 - 729 - 6561));
  // d = 12, q = 3, |E| = 3^8: 3^15 - 3^14 - 3^7 3^8 - 3^4 3^8 - 3^5 3^8 < 0
  const Rational a = lower_bound_general(6561, 3, 12, BoundCase::d4mod8_q3mod4);
  EXPECT_EQ(a, Rational(14348907LL - 4782969LL - 14348907LL - 531441LL - 1594323LL));
  EXPECT_LT(a, 0);
  EXPECT_GT(lower_bound_general(500, 3, 6, BoundCase::d2mod4), 0);
  EXPECT_THROW(lower_bound_general(10, 3, 8, BoundCase::d2mod4), std::invalid_argument);
  EXPECT_THROW(lower_bound_general(10, 5, 12, BoundCase::d4mod8_q3mod4), std::invalid_argument);
  EXPECT_THROW(lower_bound_general(10, 3, 4, BoundCase::d4mod8_q3mod4), std::invalid_argument);
  EXPECT_THROW(lower_bound_general(10, 3, 2, BoundCase::d2mod4), std::invalid_argument);
}

TEST(RandomSubset, DeterministicAndDistinct) {
  const Space S(Field::make(3), 4);
  std::mt19937_64 a(5), b(5);
  const PointSet x = random_subset(S, 40, a), y = random_subset(S, 40, b);
  EXPECT_EQ(x, y);
  EXPECT_EQ(x.size(), 40u);
  EXPECT_EQ(random_subset(S, 81, a).size(), 81u);
  EXPECT_THROW(random_subset(S, 82, a), std::invalid_argument);
}

TEST(Threshold, AboveQSquaredAlwaysCovers) {
  const Field F = Field::make(3);
  const auto rep = threshold_experiment(F, 4, {9, 10, 27}, 100, 1, {plane_times_zero(F)});
  ASSERT_EQ(rep.rows.size(), 3u);
  EXPECT_EQ(rep.rows[1].covered, 100u);
  EXPECT_EQ(rep.rows[2].covered, 100u);
  EXPECT_EQ(rep.planted.front().image, std::vector<Elem>{Elem{0}});
  const auto again = threshold_experiment(F, 4, {9, 10, 27}, 100, 1);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(again.rows[i].covered, rep.rows[i].covered);
    EXPECT_EQ(again.rows[i].min_nu_mean, rep.rows[i].min_nu_mean);
  }
  EXPECT_THROW(threshold_experiment(F, 4, {82}, 1, 1), std::invalid_argument);
}

TEST(Threshold, SevenAtFifty) {
  const auto rep = threshold_experiment(Field::make(7), 4, {50}, 100, 42, {}, NuMethod::fourier);
  EXPECT_EQ(rep.rows.front().covered, 100u);
}
