#include "sud/risk_engine.hpp"
#include "sud/sweep.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstring>
#include <random>

using namespace sud;

namespace {

Partition P(std::vector<int> v) { return Partition::from_parts(std::move(v)); }

// Oracle: parent-first accumulation. Each coefficient is pushed to every Pieri
// child; the fidelity numerator is the squared norm of the accumulated vector.
Rational parent_first_risk(int d, const ExactWeights& w) {
  std::map<Partition, Rational> acc;
  for (const auto& [l, c] : w.entries())
    for (const auto& child : pieri_add(l)) acc[child.child] += c;
  Rational q = 0;
  for (const auto& [m, s] : acc) q += s * s;
  return 1 - q / (Rational(d * d) * w.raw_squared_norm());
}

ExactWeights random_weights(int d, int n, std::mt19937& rng, bool full) {
  std::uniform_int_distribution<int> num(0, 20), den(1, 7);
  ExactWeights::Map m;
  for (const auto& l : enumerate_partitions(d, n, full ? PartitionFilter::kAll : PartitionFilter::kStrict))
    m.emplace(l, Rational(num(rng), den(rng)));
  if (m.empty() || std::all_of(m.begin(), m.end(), [](const auto& e) { return e.second == 0; }))
    m.begin()->second = 1;
  return ExactWeights(d, n, std::move(m));
}

}  // namespace

TEST(ExactRisk, GoldenValues) {
  EXPECT_EQ(exact_risk(2, 3, product_scheme(2, 3)).risk, Rational(1, 2));
  EXPECT_EQ(exact_risk(2, 4, product_scheme(2, 4)).risk, Rational(1, 2));
  EXPECT_EQ(exact_risk(2, 5, product_scheme(2, 5)).risk, Rational(7, 26));
}

TEST(ExactRisk, NumeratorTermsForD2N5) {
  const auto r = exact_risk(2, 5, product_scheme(2, 5));
  EXPECT_EQ(r.numerator_terms.at(P({6, 0})), 0);
  EXPECT_EQ(r.numerator_terms.at(P({5, 1})), 9);
  EXPECT_EQ(r.numerator_terms.at(P({4, 2})), 25);
  EXPECT_EQ(r.numerator_terms.at(P({3, 3})), 4);
  EXPECT_EQ(r.numerator, 38);
  EXPECT_EQ(r.raw_squared_norm, 13);
}

TEST(ExactRisk, Errors) {
  EXPECT_THROW(exact_risk(2, 6, product_scheme(2, 5)), InvalidArgument);
  EXPECT_THROW(exact_risk(3, 5, product_scheme(2, 5)), InvalidArgument);
  EXPECT_THROW(exact_risk(2, 2, product_scheme(2, 2)), EmptySupportError);
}

TEST(ExactRisk, MatchesParentFirstOracle) {
  std::mt19937 rng(7);
  for (int d = 2; d <= 4; ++d)
    for (int n = 0; n <= 12; ++n) {
      const auto w = random_weights(d, n, rng, true);
      EXPECT_EQ(exact_risk(d, n, w).risk, parent_first_risk(d, w)) << d << " " << n;
    }
}

TEST(ExactRisk, WithinUnitIntervalForAllSchemes) {
  for (int d = 2; d <= 4; ++d)
    for (int n = d * (d + 1) / 2; n <= 60; n += (d == 4 ? 3 : 1)) {
      for (const auto& w : {product_scheme(d, n), uniform_scheme(d, n), power_scheme_exact(d, n, 2)}) {
        const auto r = exact_risk(d, n, w).risk;
        EXPECT_GE(r, 0) << d << " " << n;
        EXPECT_LE(r, 1) << d << " " << n;
      }
    }
}

TEST(ExactRisk, ScaleInvariant) {
  const auto w = product_scheme(3, 12);
  EXPECT_EQ(exact_risk(w).risk, exact_risk(w.scaled(Rational(5, 11))).risk);
  EXPECT_EQ(exact_risk(w).risk, exact_risk(normalize(w)).risk);
}

TEST(ExactRisk, WorkerCountDoesNotChangeResult) {
  const auto w = product_scheme(3, 30);
  const auto a = exact_risk(3, 30, w, 1);
  const auto b = exact_risk(3, 30, w, 4);
  EXPECT_EQ(a.risk, b.risk);
  EXPECT_EQ(a.numerator_terms, b.numerator_terms);
  const double fa = float_risk(3, 30, w, 1);
  const double fb = float_risk(3, 30, w, 3);
  EXPECT_EQ(std::memcmp(&fa, &fb, sizeof(double)), 0);
}

TEST(FloatRisk, AgreesWithExactPath) {
  for (int d = 2; d <= 3; ++d)
    for (int n = d * (d + 1) / 2; n <= 80; n += 7) {
      const auto w = product_scheme(d, n);
      const double exact = to_double(exact_risk(d, n, w).risk);
      EXPECT_NEAR(float_risk(d, n, w), exact, 1e-12 * std::max(1.0, exact)) << d << " " << n;
    }
}

TEST(ExpansionDiagnostics, HandValuesAtD2N5) {
  const auto l = expansion_diagnostics(2, 5);
  EXPECT_EQ(l.c_t, 128);
  EXPECT_EQ(l.c_u, 128);
  EXPECT_EQ(l.t1, l.u1);
}

TEST(ExpansionDiagnostics, LeadingTermsAgreeAndExpansionIsExact) {
  for (int d = 2; d <= 4; ++d)
    for (int n = d * (d + 1) / 2 - 1; n <= 25; ++n) {
      const auto l = expansion_diagnostics(d, n);
      EXPECT_EQ(l.c_t, l.c_u) << d << " " << n;
      EXPECT_EQ(l.t1, l.u1) << d << " " << n;
      if (n >= d * (d + 1) / 2)
        EXPECT_EQ(l.expansion_risk(), exact_risk(d, n, product_scheme(d, n)).risk) << d << " " << n;
    }
}

TEST(ExpansionDiagnostics, DegenerateLevelRaises) {
  EXPECT_THROW(expansion_diagnostics(3, 4), EmptySumError);
  EXPECT_NO_THROW(expansion_diagnostics(3, 5));
}

TEST(CauchySchwarz, ProductSlackEqualsRisk) {
  const auto w = cauchy_schwarz_bound_check(2, 5, product_scheme(2, 5));
  EXPECT_TRUE(w.holds);
  EXPECT_EQ(w.slack, Rational(7, 26));
}

TEST(CauchySchwarz, ConcentratedWeights) {
  for (int d = 2; d <= 4; ++d) {
    const int n = d * (d + 1) / 2 + 3;
    for (const auto& l : enumerate_partitions(d, n, PartitionFilter::kStrict)) {
      const auto w = cauchy_schwarz_bound_check(d, n, ExactWeights(d, n, {{l, Rational(1)}}));
      EXPECT_TRUE(w.holds);
      EXPECT_GE(w.slack, 1 - Rational(1, d));
    }
  }
}

TEST(CauchySchwarz, RandomWeightsNeverViolate) {
  std::mt19937 rng(20240611);
  for (int k = 0; k < 1000; ++k) {
    const auto w = cauchy_schwarz_bound_check(3, 8, random_weights(3, 8, rng, k % 2 == 0));
    ASSERT_TRUE(w.holds) << k;
    ASSERT_GE(w.slack, 0) << k;
  }
}

TEST(RiskCurve, ProductD2FitsTen) {
  const auto c = risk_curve(2, 3, 400, parse_scheme("product"));
  ASSERT_TRUE(c.fit);
  EXPECT_GE(c.fit->intercept, 9.5);
  EXPECT_LE(c.fit->intercept, 10.5);
  EXPECT_TRUE(c.skipped.empty());
  EXPECT_EQ(c.points.front().level, 3);
}

TEST(RiskCurve, InfeasibleLevelsAreSkipped) {
  const auto c = risk_curve(3, 2, 10, parse_scheme("product"));
  ASSERT_EQ(c.skipped.size(), 4u);
  EXPECT_EQ(c.skipped.front().level, 2);
  EXPECT_EQ(c.points.front().level, 6);
}

TEST(RiskCurve, UniformSchemeHasRateOneOverN) {
  const auto c = risk_curve(2, 100, 400, parse_scheme("uniform"));
  auto at = [&](int n) {
    for (const auto& p : c.points)
      if (p.level == n) return p;
    throw std::runtime_error("missing level");
  };
  const double n_r100 = 100 * at(100).risk, n_r200 = 200 * at(200).risk, n_r400 = 400 * at(400).risk;
  EXPECT_LT(std::abs(n_r400 - n_r200), std::abs(n_r200 - n_r100));
  EXPECT_GT(at(400).n2_risk / at(200).n2_risk, 1.9);
}

TEST(RiskCurve, ProductD3FitNearSeventyFive) {
  const auto c = risk_curve(3, 6, 150, parse_scheme("product"), {.workers = 2});
  ASSERT_TRUE(c.fit);
  EXPECT_GE(c.fit->intercept, 71);
  EXPECT_LE(c.fit->intercept, 79);
}

TEST(LeastSquares, RecoversLine) {
  const auto f = least_squares({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_NEAR(f.intercept, 1, 1e-12);
  EXPECT_NEAR(f.slope, 2, 1e-12);
  EXPECT_THROW(least_squares({1}, {1}), InvalidArgument);
}
