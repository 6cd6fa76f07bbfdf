#include <vector>
#include "sud/asymptotic_constant.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace sud;

namespace {

// Oracle: the integrand written as the leading-order difference u2 - t2,
//   d * sum_i (x_{i} - [i>1] x_{i-1})^2 - x_{d}^2,
// where the second term is the telescoped square of sum_i r(i).
Polynomial u2_minus_t2_integrand(int d) {
  auto x_without = [d](int a) {
    Polynomial p = Polynomial::constant(d, 1);
    for (int j = 0; j < d; ++j)
      if (j != a) p = p * Polynomial::variable(d, j);
    return p;
  };
  Polynomial sum(d);
  for (int i = 0; i < d; ++i) {
    Polynomial term = x_without(i);
    if (i > 0) term -= x_without(i - 1);
    sum += term * term;
  }
  return Rational(d) * sum - x_without(d - 1).pow(2);
}

}  // namespace

TEST(ConstantIntegrands, D2Simplifies) {
  const auto [num, den] = constant_integrands(2);
  Polynomial expected(2);
  expected.add_term({2, 0}, 1);
  expected.add_term({0, 2}, 4);
  expected.add_term({1, 1}, -4);
  EXPECT_EQ(num, expected);
  Polynomial expected_den(2);
  expected_den.add_term({2, 2}, 4);
  EXPECT_EQ(den, expected_den);
  EXPECT_EQ(num.evaluate<Rational>(std::vector<Rational>{1, 1}), 1);
  EXPECT_EQ(den.evaluate<Rational>(std::vector<Rational>{1, 1}), 4);
}

TEST(ConstantIntegrands, MatchesIndependentExpansion) {
  for (int d = 2; d <= 5; ++d) EXPECT_EQ(constant_integrands(d).numerator, u2_minus_t2_integrand(d)) << d;
  EXPECT_GT(constant_integrands(3).numerator.term_count(), 0u);
}

TEST(ConstantIntegrands, D2NumeratorOnTheSection) {
  const auto num = constant_integrands(2).numerator;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  for (int k = 0; k < 10; ++k) {
    const double s = u(rng);
    EXPECT_NEAR(num.evaluate<double>(std::vector<double>{1 - 2 * s, s}), (1 - 4 * s) * (1 - 4 * s), 1e-14);
  }
}

TEST(Polynomial, AlgebraAndIntegration) {
  const auto x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
  const auto p = (x + y).pow(2);
  EXPECT_EQ(p.coefficient({1, 1}), 2);
  EXPECT_EQ((p - p).term_count(), 0u);
  // On the 1-simplex: integral of y1^2 y2^2 dy1 = 2!2!/5!.
  EXPECT_EQ((x * x * y * y).integrate_standard_simplex(), Rational(1, 30));
  EXPECT_EQ(Polynomial::constant(3, 1).integrate_standard_simplex(), Rational(1, 2));
  EXPECT_EQ((x * x).antiderivative(0).coefficient({3, 0}), Rational(1, 3));
  EXPECT_EQ(p.substitute(1, Polynomial::constant(2, 1)).coefficient({0, 0}), 1);
}

TEST(ExactConstant, D2IsTen) {
  const auto r = exact_constant(2);
  EXPECT_EQ(r.exact, 10);
  EXPECT_EQ(r.numerator_integral, Rational(1, 3));
  EXPECT_EQ(r.denominator_integral, Rational(1, 30));
}

TEST(ExactConstant, D3AndD4) {
  // Frozen from an independent symbolic computation of the same integrals.
  EXPECT_EQ(exact_constant(3).exact, Rational(224, 3));
  EXPECT_EQ(exact_constant(4).exact, 275);
  EXPECT_GE(exact_constant(3).value(), 74.5);
  EXPECT_LE(exact_constant(3).value(), 75.5);
}

TEST(ExactConstant, TwoParametrizationsAgree) {
  for (int d = 2; d <= 4; ++d)
    for (auto o : {SectionOrientation::kRowWeighted, SectionOrientation::kReversed})
      EXPECT_EQ(exact_constant(d, o, IntegrationRoute::kDirichlet).exact,
                exact_constant(d, o, IntegrationRoute::kIterated).exact)
          << d;
}

TEST(ExactConstant, RatioInvariantUnderCommonRescaling) {
  const auto [num, den] = constant_integrands(3);
  const auto a = section_weights(3, SectionOrientation::kRowWeighted);
  const Rational base = integrate_section_dirichlet(num, a) / integrate_section_dirichlet(den, a);
  const Rational k(17, 5);
  EXPECT_EQ(integrate_section_dirichlet(num * k, a) / integrate_section_dirichlet(den * k, a), base);
}

TEST(ExactConstant, ReversedSectionIsRejectedValue) {
  // The reversed constraint sum (d-j+1) x_j = 1 does not reproduce C(2) = 10.
  EXPECT_EQ(exact_constant(2, SectionOrientation::kReversed).exact, Rational(65, 2));
}

TEST(RiemannConstant, D2ConvergesToTen) {
  EXPECT_NEAR(riemann_constant(2, 10000), 10.0, 0.1);
  double prev_err = INFINITY;
  for (int n : {100, 200, 400, 800, 1600, 3200}) {
    const double err = std::abs(riemann_constant(2, n) - 10.0);
    EXPECT_LT(err, prev_err) << n;
    EXPECT_LT(err * n, 50.0) << n;
    prev_err = err;
  }
}

TEST(RiemannConstant, D3WithinTwoPercent) {
  const double exact = exact_constant(3).value();
  EXPECT_NEAR(riemann_constant(3, 2000), exact, 0.02 * exact);
}

TEST(RiemannConstant, EmptyLattice) {
  EXPECT_THROW(riemann_constant(3, 4), EmptySumError);
  EXPECT_NO_THROW(riemann_constant(3, 5));
}

TEST(Consistency, RiskApproachesConstant) {
  const auto d2 = constant_vs_risk_consistency(2, 200, 200);
  EXPECT_NEAR(d2.points.at(0).n2_risk, 10.0, 0.5);
  const auto d3 = constant_vs_risk_consistency(3, 120, 120);
  EXPECT_NEAR(d3.points.at(0).n2_risk, 224.0 / 3, 0.1 * 224.0 / 3);
}

TEST(Consistency, RemainderBoundedOverD2Sweep) {
  const auto r = constant_vs_risk_consistency(2, 50, 400);
  // (N^2 R - C) N stays bounded; odd and even N settle on different values.
  EXPECT_LT(r.max_abs_remainder, 20.0);
  for (int parity = 0; parity < 2; ++parity) {
    std::vector<double> rem;
    for (const auto& p : r.points)
      if (p.level % 2 == parity) rem.push_back(std::abs(p.remainder));
    EXPECT_LE(rem.back(), rem.front() + 1e-9) << parity;
  }
}
