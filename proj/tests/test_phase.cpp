#include "ncfurst/phase.hpp"
#include "ncfurst/scalar.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ncf;

TEST(Rational, ArithmeticAndParsing) {
  EXPECT_EQ(Rational(2, 4), Rational(1, 2));
  EXPECT_EQ(Rational(-7, 3).floor(), -3);
  EXPECT_EQ(Rational(-7, 3).frac(), Rational(2, 3));
  EXPECT_EQ(Rational::parse("5/10"), Rational(1, 2));
  EXPECT_EQ(Rational::parse("-0.25"), Rational(-1, 4));
  EXPECT_EQ(Rational::parse(" 3 "), Rational(3));
  EXPECT_THROW(Rational(1, 0), std::domain_error);
  EXPECT_THROW(Rational(INT64_MAX) * Rational(4), std::overflow_error);
}

TEST(Phase, MulExamples) {
  Phase a(Rational(1, 3), 1, 0), b(Rational(5, 6), 2, 1);
  EXPECT_EQ(phase_mul(Phase{}, b), b);
  EXPECT_EQ(phase_mul(Phase(Rational(1, 2)), Phase(Rational(1, 2))), Phase{});
  EXPECT_EQ(phase_mul(a, b), Phase(Rational(1, 6), 3, 1));
}

TEST(Phase, PReducedIntoUnitInterval) {
  Phase a(Rational(7, 2), 0, 0);
  EXPECT_EQ(a.p(), Rational(1, 2));
  Phase b(Rational(-1, 3), 0, 0);
  EXPECT_EQ(b.p(), Rational(2, 3));
}

TEST(Phase, Triviality) {
  EXPECT_TRUE(phase_is_trivial(Phase{}, Independent{}));
  EXPECT_FALSE(phase_is_trivial(Phase::theta(), Independent{}));
  EXPECT_TRUE(phase_is_trivial(Phase(0, -2, 1), Related{0, 2}));
  EXPECT_FALSE(phase_is_trivial(Phase(0, -1, 1), Related{0, 2}));
  // gamma = 1/2 + theta: gamma - theta = 1/2, not trivial; 2(gamma - theta) is
  EXPECT_FALSE(phase_is_trivial(Phase(0, -1, 1), Related{Rational(1, 2), 1}));
  EXPECT_TRUE(phase_is_trivial(Phase(0, -2, 2), Related{Rational(1, 2), 1}));
  NumericMode num{{0.25, 0.5}, 1e-12};
  EXPECT_TRUE(phase_is_trivial(Phase(0, 4, 0), num));
  EXPECT_TRUE(phase_is_trivial(Phase(0, 2, -1), num));
  EXPECT_FALSE(phase_is_trivial(Phase(0, 1, 0), num));
}

TEST(Phase, EvaluationIsHomomorphism) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> n(-9, 9), d(1, 9);
  Numerics x{0.6180339887498949, 0.41421356237309515};
  for (int t = 0; t < 500; ++t) {
    Phase a(Rational(n(rng), d(rng)), Rational(n(rng), d(rng)), Rational(n(rng), d(rng)));
    Phase b(Rational(n(rng), d(rng)), Rational(n(rng), d(rng)), Rational(n(rng), d(rng)));
    EXPECT_LE(std::abs(phase_mul(a, b).value(x) - a.value(x) * b.value(x)), 1e-12);
  }
}

TEST(Scalar, ExactClosedUnderProductAndAdjoint) {
  ScalarContext ctx;
  Scalar a = Scalar::exact(Rational(2, 3), Phase::theta());
  Scalar b = Scalar::exact(Rational(3), Phase::gamma(2));
  Scalar p = mul(a, b, ctx);
  ASSERT_TRUE(p.is_exact());
  EXPECT_EQ(p.as_exact().magnitude, Rational(2));
  EXPECT_EQ(p.as_exact().phase, Phase(0, 1, 2));
  EXPECT_EQ(a.conj().as_exact().phase, Phase::theta(-1));
}

TEST(Scalar, NegativeMagnitudeFoldsIntoPhase) {
  Scalar a = Scalar::exact(-2);
  EXPECT_EQ(a.as_exact().magnitude, Rational(2));
  EXPECT_EQ(a.as_exact().phase, Phase(Rational(1, 2)));
  ScalarContext ctx;
  EXPECT_TRUE(add(a, Scalar::exact(2), ctx).is_zero());
}

TEST(Scalar, MixingCoercesToApprox) {
  ScalarContext ctx{Independent{}, Numerics{0.25, 0.0}};
  Scalar a = Scalar::exact(1, Phase::theta());
  Scalar b = Scalar::approx({2.0, 0.0});
  Scalar p = mul(a, b, ctx);
  ASSERT_FALSE(p.is_exact());
  EXPECT_NEAR(std::abs(p.as_approx() - complex(0, 2)), 0.0, 1e-15);
}

TEST(Scalar, UnrelatedExactSumNeedsNumerics) {
  ScalarContext ctx;
  EXPECT_THROW(add(Scalar::exact(1, Phase::theta()), Scalar::one(), ctx), std::domain_error);
  ScalarContext rel{Related{0, 1}, std::nullopt};
  Scalar s = add(Scalar::exact(1, Phase::theta()), Scalar::exact(1, Phase::gamma()), rel);
  ASSERT_TRUE(s.is_exact());
  EXPECT_EQ(s.as_exact().magnitude, Rational(2));
}
