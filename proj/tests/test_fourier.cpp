#include <gtest/gtest.h>

#include <complex>
#include <numbers>
#include <random>
#include <sstream>

#include "ffphi/counting.hpp"
#include "ffphi/fourier.hpp"
#include "ffphi/varieties.hpp"

using namespace ffphi;

namespace {

using cd = std::complex<double>;

// Direct floating evaluation of q^-n sum_{x in E} chi(-m . x).
cd naive_transform(const PointSet& E, std::uint64_t mc) {
  const Field& F = E.field();
  const auto m = E.space().decode(mc);
  cd s = 0;
  for (auto c : E.codes()) {
    const auto x = E.space().decode(c);
    std::uint32_t dot = 0;
    for (std::size_t i = 0; i < x.size(); ++i) dot = F.addi(dot, F.muli(m[i], x[i]));
    s += std::polar(1.0, -2.0 * std::numbers::pi * F.trace(Elem{dot}) / F.p());
  }
  return s / std::pow(static_cast<double>(F.q()), E.dim());
}

PointSet random_set(const Field& F, int n, std::uint64_t size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_subset(Space(F, n), size, rng);
}

}  // namespace

TEST(Space, EncodingPutsFirstCoordinateMostSignificant) {
  const Space S(Field::make(3), 2);
  const std::vector<std::uint32_t> x{1, 2};
  EXPECT_EQ(S.encode(x), 5u);
  EXPECT_EQ(S.decode(5), x);
  EXPECT_THROW(Space(Field::make(7), 9, 1000), BudgetExceeded);
}

TEST(Dft, EmptySetIsZero) {
  const Space S(Field::make(3), 2);
  const FourierTable T = dft(PointSet(S));
  for (std::uint64_t m = 0; m < T.size(); ++m) EXPECT_TRUE(T.value(m).is_zero());
}

TEST(Dft, FullSpaceIsDeltaAtOrigin) {
  const Field F = Field::make(3);
  const FourierTable T = dft(PointSet::full(Space(F, 3)));
  EXPECT_EQ(T.value(0), CycNum::integer(F, 27));
  for (std::uint64_t m = 1; m < T.size(); ++m) EXPECT_TRUE(T.value(m).is_zero());
}

TEST(Dft, OriginIsConstantOne) {
  const Field F = Field::make(5);
  const FourierTable T = dft(PointSet(Space(F, 2), {0}));
  for (std::uint64_t m = 0; m < T.size(); ++m) EXPECT_EQ(T.value(m), CycNum::integer(F, 1));
}

TEST(Dft, AgreesWithFloatingTransform) {
  for (const Field& F : {Field::make(3), Field::make(5), Field::make(3, 2)}) {
    const PointSet E = random_set(F, 2, 7, F.q());
    const FourierTable T = dft(E);
    for (std::uint64_t m = 0; m < T.size(); ++m) EXPECT_LT(std::abs(T.normalized(m).embed() - naive_transform(E, m)), 1e-9);
  }
}

TEST(Dft, RespectsCap) {
  const PointSet E(Space(Field::make(3), 4), {0, 1});
  EXPECT_THROW(dft(E, 50), BudgetExceeded);
}

TEST(Plancherel, Examples) {
  const Field F3 = Field::make(3), F5 = Field::make(5);
  EXPECT_EQ(plancherel_sum(dft(PointSet::full(Space(F3, 2)))), Rational(1));
  EXPECT_EQ(plancherel_sum(dft(random_set(F3, 4, 7, 3))), Rational(7, 81));
  const PointSet S0 = zero_sphere(F5, 2);
  EXPECT_EQ(S0.size(), 9u);
  EXPECT_EQ(plancherel_sum(dft(S0)), Rational(9, 25));
}

TEST(Plancherel, HoldsOnRandomSets) {
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    for (const Field& F : {Field::make(3), Field::make(7), Field::make(3, 2)}) {
      const int n = F.q() == 3 ? 4 : 2;
      const PointSet E = random_set(F, n, 3 + seed * 2, seed);
      EXPECT_EQ(plancherel_sum(dft(E)), Rational(static_cast<long long>(E.size())) * q_power(F.q(), -n));
    }
}

TEST(Inversion, RecoversIndicator) {
  const Field F3 = Field::make(3), F5 = Field::make(5);
  EXPECT_TRUE(inversion_check(PointSet(Space(F3, 3), {0}), dft(PointSet(Space(F3, 3), {0}))));
  const PointSet E = random_set(F3, 4, 10, 17);
  EXPECT_TRUE(inversion_check(E, dft(E)));
  const PointSet S0 = zero_sphere(F5, 2);
  EXPECT_TRUE(inversion_check(S0, dft(S0)));
  // A table from a different set must fail.
  const PointSet other = random_set(F3, 4, 10, 18);
  EXPECT_FALSE(inversion_check(E, dft(other)));
}

TEST(Translation, ModulatesTransform) {
  const Field F = Field::make(5);
  const PointSet E = random_set(F, 2, 8, 4);
  const std::vector<std::uint32_t> v{3, 1};
  const FourierTable T = dft(E), Tv = dft(translate(E, v));
  for (std::uint64_t mc = 0; mc < T.size(); ++mc) {
    const auto m = E.space().decode(mc);
    const Elem dot = F.add(F.mul(Elem{m[0]}, Elem{v[0]}), F.mul(Elem{m[1]}, Elem{v[1]}));
    EXPECT_EQ(Tv.value(mc), chi(F, F.neg(dot)) * T.value(mc));
  }
}

TEST(PointSetIo, RoundTrip) {
  const Field F = Field::make(3, 2);
  const PointSet E = random_set(F, 3, 20, 5);
  std::stringstream buf;
  write_point_set(buf, E);
  EXPECT_EQ(buf.str().substr(0, 10), "q=3^2 n=3\n");
  EXPECT_EQ(read_point_set(buf), E);
}

TEST(PointSetIo, RejectsMalformedInput) {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return read_point_set(in);
  };
  EXPECT_THROW(parse(""), std::invalid_argument);
  EXPECT_THROW(parse("q=3\n"), std::invalid_argument);
  EXPECT_THROW(parse("q=4 n=2\n0,0\n"), std::invalid_argument);
  EXPECT_THROW(parse("q=3 n=2\n0,3\n"), std::invalid_argument);
  EXPECT_THROW(parse("q=3 n=2\n0,1,2\n"), std::invalid_argument);
  EXPECT_THROW(parse("q=3 n=2\n0,x\n"), std::invalid_argument);
  EXPECT_THROW(parse("q=3 n=2\n1,1\n1,1\n"), std::invalid_argument);
  EXPECT_THROW(parse("q=3 n=20\n"), BudgetExceeded);
  EXPECT_EQ(parse("q=3 n=2\n\n1,2\n").size(), 1u);
}
