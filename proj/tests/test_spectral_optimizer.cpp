#include "sud/spectral_optimizer.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <cmath>

using namespace sud;

namespace {

Partition P(std::vector<int> v) { return Partition::from_parts(std::move(v)); }

// Oracle: dense B^T B and a direct symmetric eigensolver.
double dense_eigmax(const IncidenceStructure& b) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(b.rows().size(), b.cols().size());
  for (std::size_t r = 0; r < b.rows().size(); ++r)
    for (int c : b.row_entries(r)) m(r, c) = 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.transpose() * m);
  return es.eigenvalues().maxCoeff();
}

}  // namespace

TEST(BuildIncidence, SmallFullStructures) {
  const auto b1 = build_incidence(2, 1, Support::kFull);
  ASSERT_EQ(b1.rows(), (std::vector<Partition>{P({2, 0}), P({1, 1})}));
  ASSERT_EQ(b1.cols(), (std::vector<Partition>{P({1, 0})}));
  EXPECT_TRUE(b1.related(0, 0));
  EXPECT_TRUE(b1.related(1, 0));

  const auto b2 = build_incidence(2, 2, Support::kFull);
  ASSERT_EQ(b2.rows(), (std::vector<Partition>{P({3, 0}), P({2, 1})}));
  ASSERT_EQ(b2.cols(), (std::vector<Partition>{P({2, 0}), P({1, 1})}));
  EXPECT_TRUE(b2.related(0, 0));
  EXPECT_FALSE(b2.related(0, 1));
  EXPECT_TRUE(b2.related(1, 0));
  EXPECT_TRUE(b2.related(1, 1));
}

TEST(BuildIncidence, StrictD2N5) {
  const auto b = build_incidence(2, 5, Support::kStrict);
  EXPECT_EQ(b.cols(), (std::vector<Partition>{P({4, 1}), P({3, 2})}));
  std::vector<Partition> active;
  for (std::size_t r = 0; r < b.rows().size(); ++r)
    if (b.row_degree(r) > 0) active.push_back(b.rows()[r]);
  EXPECT_EQ(active, (std::vector<Partition>{P({5, 1}), P({4, 2}), P({3, 3})}));
}

TEST(BuildIncidence, Degrees) {
  for (int d = 2; d <= 4; ++d)
    for (int n = 0; n <= 10; ++n) {
      const auto b = build_incidence(d, n, Support::kFull);
      for (std::size_t r = 0; r < b.rows().size(); ++r)
        EXPECT_EQ(b.row_degree(r), static_cast<int>(removable_rows(b.rows()[r]).size()));
      for (std::size_t c = 0; c < b.cols().size(); ++c)
        EXPECT_EQ(b.col_degree(c), static_cast<int>(pieri_add(b.cols()[c]).size()));
    }
}

TEST(BuildIncidence, EmptyStrictSupport) {
  EXPECT_THROW(build_incidence(2, 2, Support::kStrict), EmptySupportError);
  EXPECT_THROW(build_incidence(3, 5, Support::kStrict), EmptySupportError);
}

TEST(MaxEigenpair, ClosedFormSmallCases) {
  const auto r1 = optimal_scheme(2, 1, Support::kFull);
  EXPECT_NEAR(r1.eigmax, 2.0, 1e-10);
  EXPECT_NEAR(r1.optimal_risk(), 0.5, 1e-10);

  const auto r2 = optimal_scheme(2, 2, Support::kFull);
  EXPECT_NEAR(r2.eigmax, (3 + std::sqrt(5.0)) / 2, 1e-10);
  EXPECT_NEAR(r2.optimal_risk(), 0.34549150281252629, 1e-10);
}

TEST(MaxEigenpair, MatchesDenseSolver) {
  for (int d = 2; d <= 4; ++d)
    for (int n = 1; n <= (d == 4 ? 10 : 16); ++n)
      for (auto support : {Support::kFull, Support::kStrict}) {
        if (support == Support::kStrict && n < d * (d + 1) / 2) continue;
        const auto b = build_incidence(d, n, support);
        const auto r = max_eigenpair(b);
        EXPECT_NEAR(r.eigmax, dense_eigmax(b), 1e-9 * r.eigmax) << d << " " << n;
        EXPECT_LE(r.residual, 1e-12 * r.eigmax);
        EXPECT_GT(r.eigmax, 0);
        EXPECT_LE(r.eigmax, d * d + 1e-9);
        for (const auto& [l, c] : r.eigvec.entries()) EXPECT_GE(c, 0);
        EXPECT_NEAR(r.eigvec.squared_norm(), 1.0, 1e-12);
      }
}

TEST(MaxEigenpair, EigenvectorRiskMatchesEigenvalue) {
  const auto r = optimal_scheme(3, 9, Support::kFull);
  const double risk = float_risk(3, 9, r.eigvec);
  EXPECT_NEAR(risk, r.optimal_risk(), 1e-10);
  EXPECT_NEAR(to_double(exact_risk(3, 9, to_exact(r.eigvec)).risk), r.optimal_risk(), 1e-10);
}

TEST(MaxEigenpair, FullSupportDominatesStrict) {
  for (int d = 2; d <= 3; ++d)
    for (int n = d * (d + 1) / 2; n <= 30; ++n) {
      const double full = optimal_scheme(d, n, Support::kFull).eigmax;
      const double strict = optimal_scheme(d, n, Support::kStrict).eigmax;
      EXPECT_GE(full, strict - 1e-10) << d << " " << n;
    }
}

TEST(MaxEigenpair, Deterministic) {
  const auto a = optimal_scheme(3, 20, Support::kFull);
  const auto b = optimal_scheme(3, 20, Support::kFull);
  EXPECT_EQ(a.eigmax, b.eigmax);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.eigvec.entries(), b.eigvec.entries());
}

TEST(MaxEigenpair, ConvergenceErrorCarriesBestIterate) {
  const auto b = build_incidence(2, 40, Support::kFull);
  try {
    max_eigenpair(b, {.tol = 1e-12, .max_iterations = 5});
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.best_iterate().size(), b.cols().size());
    EXPECT_GT(e.rayleigh(), 0);
  }
  EXPECT_THROW(max_eigenpair(b, {.tol = 0}), InvalidArgument);
}

TEST(MaxEigenpair, ConnectedSupports) {
  for (int d = 2; d <= 4; ++d) {
    EXPECT_EQ(optimal_scheme(d, 8, Support::kFull).components, 1);
    const auto s = optimal_scheme(d, d * (d + 1) / 2 + 4, Support::kStrict);
    EXPECT_FALSE(s.degenerate);
  }
}

TEST(OptimalityGap, ProductNeverBeatsOptimum) {
  const auto g5 = optimality_gap(2, 5);
  ASSERT_TRUE(g5.product_risk);
  EXPECT_EQ(*g5.product_risk, Rational(7, 26));
  EXPECT_GE(*g5.gap(), -1e-10);

  const auto g1 = optimality_gap(2, 1);
  EXPECT_FALSE(g1.product_risk);
  EXPECT_NEAR(g1.optimal_risk, 0.5, 1e-10);

  const auto g10 = optimality_gap(3, 10);
  EXPECT_GE(*g10.gap(), -1e-10);
}

TEST(OptimalityGap, EigmaxBoundsEveryScheme) {
  for (int d = 2; d <= 4; ++d)
    for (int n = d * (d + 1) / 2; n <= 3 * d * d; ++n) {
      const auto r = optimal_scheme(d, n, Support::kFull);
      const double product = to_double(exact_risk(d, n, product_scheme(d, n)).risk);
      EXPECT_GE(r.eigmax, d * d * (1 - product) - 1e-9) << d << " " << n;
    }
}
