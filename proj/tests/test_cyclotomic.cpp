#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "ffphi/cyclotomic.hpp"

using namespace ffphi;

namespace {

using cd = std::complex<double>;

cd zeta(int p, int k) { return std::polar(1.0, 2.0 * std::numbers::pi * k / p); }

// Floating-point Gauss sum built only from the field tables.
cd gauss_float(const Field& F, Elem a) {
  cd s = 0;
  for (std::uint32_t x = 1; x < F.q(); ++x) s += static_cast<double>(F.eta(Elem{x})) * zeta(F.p(), F.trace(F.mul(a, Elem{x})));
  return s;
}

std::vector<Field> odd_prime_powers_to_49() {
  std::vector<Field> out;
  for (int q = 3; q <= 49; q += 2) {
    try {
      out.push_back(parse_field(std::to_string(q)));
    } catch (const std::invalid_argument&) {
    }
  }
  return out;
}

}  // namespace

TEST(CycNum, RelationsOfTheRootOfUnity) {
  const Field F = Field::make(5);
  CycNum sum(F);
  for (int k = 0; k < 5; ++k) sum += CycNum::zeta_power(F, k);
  EXPECT_TRUE(sum.is_zero());
  EXPECT_EQ(pow(CycNum::zeta_power(F, 1), 5), CycNum::integer(F, 1));
  EXPECT_EQ(CycNum::zeta_power(F, 2).conj(), CycNum::zeta_power(F, 3));
  EXPECT_EQ(CycNum::zeta_power(F, 7), CycNum::zeta_power(F, 2));
  EXPECT_EQ(CycNum::zeta_power(F, -1), CycNum::zeta_power(F, 4));
}

TEST(CycNum, CanonicalDenominators) {
  const Field F = Field::make(3);
  const CycNum a = CycNum::rational(F, 9, 3);  // 9 / 27 = 1/3
  EXPECT_EQ(a.den_exp(), 1);
  EXPECT_EQ(a, CycNum::rational(F, 1, 1));
  EXPECT_EQ(a.as_rational(), Rational(1, 3));
  EXPECT_EQ(a.scaled(-1), CycNum::integer(F, 1));
  EXPECT_EQ(CycNum::rational(F, 0, 5).den_exp(), 0);
  EXPECT_EQ((a + a + a).as_integer(), 1);
  EXPECT_FALSE(CycNum::zeta_power(F, 1).is_rational());
}

TEST(CycNum, OverflowIsDetected) {
  const Field F = Field::make(3);
  CycNum big = CycNum::integer(F, std::int64_t{1} << 62);
  EXPECT_THROW(big *= 4, std::overflow_error);
}

TEST(CycNum, MixedFieldsRejected) {
  EXPECT_THROW(CycNum::integer(Field::make(3), 1) + CycNum::integer(Field::make(5), 1), std::invalid_argument);
}

TEST(Chi, IsAdditive) {
  for (const Field& F : {Field::make(7), Field::make(3, 2), Field::make(5, 2)})
    for (std::uint32_t a = 0; a < F.q(); ++a)
      for (std::uint32_t b = 0; b < F.q(); ++b)
        ASSERT_EQ(chi(F, F.add(Elem{a}, Elem{b})), chi(F, Elem{a}) * chi(F, Elem{b}));
}

TEST(Orthogonality, SumIsFullOrZero) {
  const Field F3 = Field::make(3), F5 = Field::make(5);
  const Elem zero2[2] = {F3.zero(), F3.zero()};
  const Elem e1[2] = {F3.one(), F3.zero()};
  const Elem ones[3] = {F5.one(), F5.one(), F5.one()};
  EXPECT_EQ(orthogonality_sum(F3, zero2), CycNum::integer(F3, 9));
  EXPECT_TRUE(orthogonality_sum(F3, e1).is_zero());
  EXPECT_TRUE(orthogonality_sum(F5, ones).is_zero());
}

TEST(Gauss, SquareIsEtaMinusOneTimesQ) {
  EXPECT_EQ(pow(gauss_sum(Field::make(7), Elem{1}), 2), CycNum::integer(Field::make(7), -7));
  EXPECT_EQ(pow(gauss_sum(Field::make(5), Elem{1}), 2), CycNum::integer(Field::make(5), 5));
  const Field F27 = Field::make(3, 3);
  EXPECT_EQ(pow(gauss_sum(F27, F27.one()), 2), CycNum::integer(F27, -27));
  for (const Field& F : odd_prime_powers_to_49()) EXPECT_TRUE(verify_gauss_square(F)) << F.designation();
}

TEST(Gauss, EmbeddingMatchesFloatingSumAndPredictedValue) {
  for (const Field& F : odd_prime_powers_to_49()) {
    const cd exact = gauss_sum(F, F.one()).embed();
    EXPECT_LT(std::abs(exact - gauss_float(F, F.one())), 1e-9) << F.designation();
    // Independent statement of the predicted value.
    const double r = std::sqrt(static_cast<double>(F.q()));
    const double sign = F.ell() % 2 == 1 ? 1.0 : -1.0;
    cd pred = sign * r;
    if (F.p() % 4 == 3) pred *= std::pow(cd(0, 1), F.ell());
    EXPECT_LT(std::abs(exact - pred), 1e-9) << F.designation();
    EXPECT_LT(std::abs(gauss_sum_predicted(F) - pred), 1e-12);
  }
}

TEST(Gauss, FrozenValues) {
  // q = 3: zeta - zeta^2 = i sqrt 3; q = 5: zeta - zeta^2 - zeta^3 + zeta^4 = sqrt 5.
  const Field F3 = Field::make(3), F5 = Field::make(5);
  EXPECT_EQ(gauss_sum(F3, F3.one()), CycNum::zeta_power(F3, 1) - CycNum::zeta_power(F3, 2));
  EXPECT_EQ(gauss_sum(F5, F5.one()), CycNum::zeta_power(F5, 1) - CycNum::zeta_power(F5, 2) - CycNum::zeta_power(F5, 3) +
                                         CycNum::zeta_power(F5, 4));
  EXPECT_NEAR(gauss_sum(F5, F5.one()).embed().real(), std::sqrt(5.0), 1e-12);
}

TEST(Gauss, ScalesByEta) {
  for (const Field& F : {Field::make(7), Field::make(3, 2), Field::make(13)})
    for (std::uint32_t a = 1; a < F.q(); ++a)
      EXPECT_EQ(gauss_sum(F, Elem{a}), gauss_sum(F, F.one()) * F.eta(Elem{a}));
  EXPECT_THROW(gauss_sum(Field::make(5), Elem{0}), std::invalid_argument);
}

TEST(CompletedSquare, AllPairs) {
  for (int q : {3, 5, 7, 9, 11, 13}) {
    const Field F = parse_field(std::to_string(q));
    for (std::uint32_t a = 1; a < F.q(); ++a)
      for (std::uint32_t b = 0; b < F.q(); ++b) {
        CycNum direct(F);
        for (std::uint32_t s = 0; s < F.q(); ++s) {
          const Elem x = F.add(F.mul(Elem{a}, F.square(Elem{s})), F.mul(Elem{b}, Elem{s}));
          direct += chi(F, x);
        }
        ASSERT_EQ(completed_square_sum(F, Elem{a}, Elem{b}), direct);
        ASSERT_EQ(completed_square_closed(F, Elem{a}, Elem{b}), direct);
      }
  }
}

TEST(CompletedSquare, Examples) {
  const Field F5 = Field::make(5), F3 = Field::make(3);
  EXPECT_EQ(completed_square_sum(F5, F5.one(), F5.zero()), gauss_sum(F5, F5.one()));
  EXPECT_EQ(completed_square_sum(F3, F3.one(), Elem{2}), gauss_sum(F3, F3.one()) * chi(F3, F3.neg(F3.one())));
  EXPECT_THROW(completed_square_sum(F3, F3.zero(), F3.one()), std::invalid_argument);
}
