#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "copert/acceleration.hpp"
#include "copert/big_int.hpp"
#include "copert/error.hpp"
#include "copert/mat2.hpp"
#include "copert/quasi_random.hpp"
#include "oracles.hpp"

using namespace copert;

TEST(Mat2, ProductMatchesComposition) {
  const Mat2 m{1, 2, 3, 5};
  const Mat2 n{2, 1, 1, 1};
  const double x = 0.3;
  EXPECT_NEAR((m * n).apply(x), m.apply(n.apply(x)), 1e-15);
  EXPECT_EQ((m * n).det(), m.det() * n.det());
  EXPECT_EQ(m * Mat2::identity(), m);
}

TEST(Mat2, OverflowThrows) {
  const Mat2 big{std::int64_t{1} << 40, 0, 0, 1};
  EXPECT_THROW(big * big, CapacityError);
}

TEST(Mat2, DenominatorIsCxPlusD) {
  const Mat2 m{1, 0, 3, 4};
  EXPECT_DOUBLE_EQ(m.denominator(2.0), 10.0);
}

TEST(IntPolynomial, ConvolutionAgreesWithOracle) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coef(-50, 50);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<BigInt> p(1 + trial % 7);
    std::vector<BigInt> q(1 + trial % 5);
    for (auto& c : p) c = coef(rng);
    for (auto& c : q) c = coef(rng);
    const IntPolynomial prod = IntPolynomial(p) * IntPolynomial(q);
    EXPECT_EQ(prod.coeffs(), oracle::multiply(p, q));
  }
}

TEST(IntPolynomial, OneMinusMonomial) {
  IntPolynomial p{1, 2, 3};
  p.multiply_one_minus_monomial(2);
  EXPECT_EQ(p, (IntPolynomial{1, 2, 2, -2, -3}));
}

TEST(IntPolynomial, L2MassAndEvaluate) {
  const IntPolynomial p{1, -1, -1, 1};
  EXPECT_EQ(p.l2_mass(), 4);
  EXPECT_EQ(p.evaluate(2), 1 - 2 - 4 + 8);
}

TEST(BigRatio, HugeOperands) {
  const BigInt a = BigInt(1) << 5000;
  const BigInt b = BigInt(1) << 4998;
  EXPECT_NEAR(static_cast<double>(big_ratio(a, b)), 4.0, 1e-15);
  EXPECT_NEAR(static_cast<double>(big_ratio(BigInt(7), BigInt(2))), 3.5, 1e-15);
}

TEST(Acceleration, PureGeometric) {
  std::vector<long double> values;
  for (int r = 1; r <= 12; ++r) values.push_back(3.0L * std::pow(0.7L, r));
  const Estimate e = ratio_growth(values);
  EXPECT_NEAR(e.value, 0.7, 1e-14);
  EXPECT_LT(e.error_band, 1e-14);
}

TEST(Acceleration, TwoTermSequence) {
  const long double lambda = 0.9L;
  const long double mu = 0.5L;
  const int R = 20;
  std::vector<long double> values;
  for (int r = 1; r <= R; ++r) values.push_back(std::pow(lambda, r) * (1 + std::pow(mu, r)));
  const Estimate e = ratio_growth(values);
  EXPECT_NEAR(e.value, static_cast<double>(lambda), static_cast<double>(std::pow(mu / lambda, R)));
}

TEST(Acceleration, AitkenOnLinearConvergence) {
  std::vector<long double> terms;
  for (int n = 0; n < 10; ++n) terms.push_back(2.0L + std::pow(0.3L, n));
  const auto t = aitken_transform(terms);
  ASSERT_EQ(t.size(), terms.size() - 2);
  for (long double v : t) EXPECT_NEAR(static_cast<double>(v), 2.0, 1e-12);
}

TEST(Acceleration, NeedsFiveTerms) {
  const std::vector<long double> few{1, 2, 3, 4};
  EXPECT_THROW(accelerated_limit(few), Error);
}

TEST(KroneckerSequence, DeterministicAndInUnitInterval) {
  const KroneckerSequence s(3);
  const KroneckerSequence t(3);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const double u = s.at(i);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_EQ(u, t.at(i));
  }
  EXPECT_NE(KroneckerSequence(4).at(0), s.at(0));
}

TEST(KroneckerSequence, LowDiscrepancy) {
  const KroneckerSequence s(0);
  std::vector<int> bins(10, 0);
  for (std::uint64_t i = 0; i < 10000; ++i) ++bins[static_cast<int>(s.at(i) * 10)];
  for (int b : bins) EXPECT_NEAR(b, 1000, 20);
}
