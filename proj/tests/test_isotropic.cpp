#include <gtest/gtest.h>

#include "ffphi/isotropic.hpp"

using namespace ffphi;

TEST(Rank, RowReduction) {
  const Field F = Field::make(3);
  EXPECT_EQ(rank(F, {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}}), 2);
  EXPECT_EQ(rank(F, {{1, 2}, {2, 1}}), 1);  // second row is twice the first mod 3
  EXPECT_EQ(rank(F, {}), 0);
}

TEST(SubspaceBasis, SpanAndCertificate) {
  const Field F = Field::make(3);
  const SubspaceBasis H(F, 4, {{1, 1, 1, 0}, {2, 1, 0, 1}});
  EXPECT_TRUE(H.certified());
  EXPECT_EQ(H.span_size(), 9u);
  const auto codes = H.span_codes();
  EXPECT_EQ(codes.size(), 9u);
  const Space S(F, 4);
  for (auto c : codes) EXPECT_EQ(norm_of(F, S.decode(c)), 0u);
  EXPECT_TRUE(H.contains(std::vector<std::uint32_t>{0, 2, 1, 1}));  // sum of the basis vectors
  EXPECT_FALSE(H.contains(std::vector<std::uint32_t>{1, 0, 0, 0}));
  EXPECT_FALSE(SubspaceBasis(F, 2, {{1, 0}}).gram_is_zero());
  EXPECT_THROW(SubspaceBasis(F, 3, {{1, 0}}), std::invalid_argument);
}

TEST(MaxIsotropic, Examples) {
  const Field F3 = Field::make(3), F5 = Field::make(5);
  const auto h52 = max_isotropic_construct(F5, 2);
  ASSERT_EQ(h52.dim(), 1);
  EXPECT_EQ(h52.vectors().front(), (Vec{1, 2}));
  EXPECT_EQ(max_isotropic_construct(F3, 2).dim(), 0);
  const auto h34 = max_isotropic_construct(F3, 4);
  EXPECT_EQ(h34.vectors(), (std::vector<Vec>{{1, 1, 1, 0}, {2, 1, 0, 1}}));
  for (int q : {3, 5, 7, 9, 11}) EXPECT_EQ(max_isotropic_construct(parse_field(std::to_string(q)), 3).span_size(), static_cast<std::uint64_t>(q));
  EXPECT_THROW(max_isotropic_construct(F3, 1), std::invalid_argument);
}

TEST(MaxIsotropic, BruteExamples) {
  EXPECT_EQ(max_isotropic_brute(Field::make(5), 2), 1);
  EXPECT_EQ(max_isotropic_brute(Field::make(3), 4), 2);
  EXPECT_EQ(max_isotropic_brute(Field::make(3), 5), 2);
  EXPECT_THROW(max_isotropic_brute(Field::make(7), 8, 10000), BudgetExceeded);
}

TEST(MaxIsotropic, ConstructionIsMaximal) {
  std::vector<std::pair<int, int>> grid;
  for (int q : {3, 5, 7})
    for (int n = 2; n <= 5; ++n) grid.push_back({n, q});
  grid.push_back({6, 3});
  grid.push_back({2, 9});
  grid.push_back({4, 9});
  for (auto [n, q] : grid) {
    const Field F = parse_field(std::to_string(q));
    const auto H = max_isotropic_construct(F, n);
    EXPECT_TRUE(H.certified());
    EXPECT_EQ(H.dim(), max_isotropic_dimension(F, n));
    EXPECT_EQ(H.dim(), max_isotropic_brute(F, n)) << n << " " << q;
  }
}

TEST(MaxIsotropic, ResidueClassification) {
  // (eta(-1))^(n/2) = 1 iff q = 1 mod 4 or n = 0 mod 4.
  for (int q : {3, 5, 7, 9, 11, 13, 27, 25})
    for (int n = 2; n <= 12; n += 2) {
      const Field F = parse_field(std::to_string(q));
      const bool full = q % 4 == 1 || n % 4 == 0;
      EXPECT_EQ(max_isotropic_dimension(F, n), full ? n / 2 : (n - 2) / 2);
      EXPECT_EQ(max_isotropic_construct(F, n).dim(), max_isotropic_dimension(F, n));
    }
}

TEST(Sharpness, SizesAndNullImage) {
  struct Case {
    int d, q;
    std::uint64_t size;
  };
  for (const Case& c : {Case{4, 3, 9}, Case{4, 7, 49}, Case{4, 5, 125}, Case{4, 13, 2197}, Case{12, 3, 6561},
                        Case{8, 3, 729}, Case{8, 5, 15625}, Case{6, 3, 81}, Case{6, 5, 625}, Case{10, 3, 2187}}) {
    const Field F = Field::make(c.q);
    const SharpnessSet s = sharpness_set(F, c.d);
    EXPECT_EQ(s.set.size(), c.size);
    EXPECT_EQ(s.expected_size, c.size);
    const auto v = verify_null(s);
    EXPECT_TRUE(v.pass()) << c.d << " " << c.q;
    EXPECT_EQ(v.brute_ran, c.size * c.size <= 10'000'000);
    EXPECT_EQ(v.image, std::vector<Elem>{Elem{0}});
  }
}

TEST(Sharpness, ExplicitSmallSets) {
  const Field F5 = Field::make(5);
  const SharpnessSet s = sharpness_set(F5, 4);
  // F_5^2 x {(t, 2t)}
  const Space S(F5, 4);
  for (std::uint32_t t = 0; t < 5; ++t)
    EXPECT_TRUE(s.set.contains(S.encode(std::vector<std::uint32_t>{3, 4, t, (2 * t) % 5})));
  EXPECT_EQ(s.size_formula, "q^3");
  const SharpnessSet z = sharpness_set(Field::make(3), 4);
  EXPECT_TRUE(z.set.contains(Space(Field::make(3), 4).encode(std::vector<std::uint32_t>{2, 1, 0, 0})));
  EXPECT_EQ(z.subspace.dim(), 0);
}

TEST(Sharpness, RejectsOutsideHypotheses) {
  EXPECT_THROW(sharpness_set(Field::make(3), 5), std::invalid_argument);
  EXPECT_THROW(sharpness_set(Field::make(3), 2), std::invalid_argument);
}

TEST(Sharpness, TamperedSetFailsVerification) {
  SharpnessSet s = sharpness_set(Field::make(3), 6);
  std::vector<std::uint64_t> codes(s.set.codes().begin(), s.set.codes().end());
  std::uint64_t extra = 0;
  while (s.set.contains(extra)) ++extra;
  codes.push_back(extra);
  s.set = PointSet(s.set.space(), codes);
  EXPECT_FALSE(verify_null(s).pass());
}
