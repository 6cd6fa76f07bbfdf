#pragma once

// The constant C in R(N) = C / N^2 + O(1/N^3) for the product-of-gaps scheme.
//
// With x_E = prod_{j not in E} x_j, C is the ratio of
//   2d ( sum_i x_{i}^2 - sum_{i>=2} x_{i} x_{i-1} ) - (d+1) x_{d}^2
// and
//   d^2 prod_j x_j^2
// integrated over the section {x >= 0, sum_j a_j x_j = 1}. Gap vectors of
// level-M partitions satisfy sum_j j p_j = M, so x = p / M lies on the section
// with a_j = j; that is the orientation used by default.

#include "sud/core.hpp"
#include "sud/detail/parallel.hpp"
#include "sud/polynomial.hpp"
#include "sud/risk_engine.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace sud {

using Polynomial = MonomialPolynomial<Rational>;

struct ConstantIntegrands {
  Polynomial numerator;
  Polynomial denominator;
};

inline ConstantIntegrands constant_integrands(int d) {
  if (d < 2) throw InvalidArgument("d must be at least 2");
  // x_E for E = {a, b} (a == b for singletons), 0-based indices.
  auto x_without = [d](int a, int b) {
    Polynomial p = Polynomial::constant(d, 1);
    for (int j = 0; j < d; ++j)
      if (j != a && j != b) p = p * Polynomial::variable(d, j);
    return p;
  };
  Polynomial sq(d), cross(d);
  for (int i = 0; i < d; ++i) sq += x_without(i, i).pow(2);
  for (int i = 1; i < d; ++i) cross += x_without(i, i) * x_without(i - 1, i - 1);
  Polynomial num = Rational(2 * d) * (sq - cross) - Rational(d + 1) * x_without(d - 1, d - 1).pow(2);

  Polynomial den = Polynomial::constant(d, Rational(d * d));
  for (int j = 0; j < d; ++j) den = den * Polynomial::variable(d, j).pow(2);
  return {std::move(num), std::move(den)};
}

enum class SectionOrientation {
  kRowWeighted,  // sum_j j x_j = 1
  kReversed,     // sum_j (d - j + 1) x_j = 1
};

inline std::vector<Rational> section_weights(int d, SectionOrientation o) {
  std::vector<Rational> a;
  for (int j = 1; j <= d; ++j) a.emplace_back(o == SectionOrientation::kRowWeighted ? j : d - j + 1);
  return a;
}

/// Integral over {x >= 0, sum a_j x_j = 1} after y_j = a_j x_j, up to a
/// factor that depends only on a (the same for every integrand).
inline Rational integrate_section_dirichlet(const Polynomial& p, const std::vector<Rational>& a) {
  std::vector<Rational> inv;
  for (const auto& w : a) inv.push_back(Rational(1 / w));
  return p.scale_variables(inv).integrate_standard_simplex();
}

/// Same section, parametrized by x_2..x_d after eliminating x_1, integrated by
/// iterated antiderivatives over {x_j >= 0, sum_{j>=2} a_j x_j <= 1}. Differs
/// from the Dirichlet route by a constant Jacobian only.
inline Rational integrate_section_iterated(const Polynomial& p, const std::vector<Rational>& a) {
  const int d = p.vars();
  Polynomial x1 = Polynomial::constant(d, 1);
  for (int j = 1; j < d; ++j) x1 -= a[j] * Polynomial::variable(d, j);
  Polynomial f = p.substitute(0, x1 * Rational(1 / a[0]));
  for (int k = d - 1; k >= 1; --k) {
    Polynomial upper = Polynomial::constant(d, 1);
    for (int j = 1; j < k; ++j) upper -= a[j] * Polynomial::variable(d, j);
    upper = upper * Rational(1 / a[k]);
    const Polynomial anti = f.antiderivative(k);
    f = anti.substitute(k, upper) - anti.substitute(k, Polynomial(d));
  }
  return f.coefficient(std::vector<int>(static_cast<std::size_t>(d), 0));
}

enum class IntegrationRoute { kDirichlet, kIterated };

struct ConstantReport {
  int d = 0;
  Rational exact;
  Rational numerator_integral;
  Rational denominator_integral;
  std::vector<std::pair<int, double>> riemann;  // (N, estimate)

  double value() const { return to_double(exact); }
};

inline ConstantReport exact_constant(int d, SectionOrientation orientation = SectionOrientation::kRowWeighted,
                                     IntegrationRoute route = IntegrationRoute::kDirichlet) {
  const auto integrands = constant_integrands(d);
  const auto a = section_weights(d, orientation);
  auto integrate = [&](const Polynomial& p) {
    return route == IntegrationRoute::kDirichlet ? integrate_section_dirichlet(p, a)
                                                 : integrate_section_iterated(p, a);
  };
  ConstantReport r;
  r.d = d;
  r.numerator_integral = integrate(integrands.numerator);
  r.denominator_integral = integrate(integrands.denominator);
  r.exact = r.numerator_integral / r.denominator_integral;
  return r;
}

namespace detail {

// Visits every gap vector p >= 0 with sum_j (j+1) p_j == total.
template <class Fn>
void for_each_gap_vector(int d, int total, Fn&& fn) {
  std::vector<int> p(static_cast<std::size_t>(d), 0);
  auto rec = [&](auto&& self, int j, int remaining) -> void {
    if (j == 0) {
      p[0] = remaining;
      fn(p);
      return;
    }
    for (int v = 0; (j + 1) * v <= remaining; ++v) {
      p[static_cast<std::size_t>(j)] = v;
      self(self, j - 1, remaining - (j + 1) * v);
    }
  };
  rec(rec, d - 1, total);
}

}  // namespace detail

/// Ratio of lattice sums of the two integrands over x = p/(N+1) with
/// sum_j j p_j = N+1, one unit weight per point.
inline double riemann_constant(int d, int n) {
  if (d < 2) throw InvalidArgument("d must be at least 2");
  if (n < 0) throw InvalidArgument("N must be nonnegative");
  const auto integrands = constant_integrands(d);
  const double scale = 1.0 / (n + 1);
  detail::KahanSum num, den;
  std::vector<double> x(static_cast<std::size_t>(d));
  detail::for_each_gap_vector(d, n + 1, [&](const std::vector<int>& p) {
    for (int j = 0; j < d; ++j) x[j] = p[j] * scale;
    num.add(integrands.numerator.evaluate<double>(x));
    den.add(integrands.denominator.evaluate<double>(x));
  });
  if (den.value() == 0)
    throw EmptySumError("lattice section has no interior point at d=" + std::to_string(d) +
                        ", N=" + std::to_string(n));
  return num.value() / den.value();
}

struct ConsistencyPoint {
  int level = 0;
  double n2_risk = 0;
  double remainder = 0;  // (N^2 R - C) * N
};

struct ConsistencyReport {
  int d = 0;
  Rational constant;
  std::vector<ConsistencyPoint> points;
  double max_abs_remainder = 0;
  double fitted_remainder = 0;  // mean of (N^2 R - C) N over the upper half
};

/// Compares N^2 R(N) of the exact product-scheme risk with C over [lo, hi].
inline ConsistencyReport constant_vs_risk_consistency(int d, int lo, int hi, unsigned workers = 1) {
  if (hi < lo) throw InvalidArgument("empty N range");
  ConsistencyReport rep;
  rep.d = d;
  rep.constant = exact_constant(d).exact;
  const double c = to_double(rep.constant);
  const auto risks = detail::parallel_map<double>(static_cast<std::size_t>(hi - lo + 1), workers, [&](std::size_t k) {
    const int n = lo + static_cast<int>(k);
    const auto w = product_scheme(d, n);
    if (w.empty()) return std::nan("");
    return to_double(exact_risk(d, n, w).risk);
  });
  for (std::size_t k = 0; k < risks.size(); ++k) {
    if (std::isnan(risks[k])) continue;
    const int n = lo + static_cast<int>(k);
    ConsistencyPoint pt;
    pt.level = n;
    pt.n2_risk = static_cast<double>(n) * n * risks[k];
    pt.remainder = (pt.n2_risk - c) * n;
    rep.max_abs_remainder = std::max(rep.max_abs_remainder, std::abs(pt.remainder));
    rep.points.push_back(pt);
  }
  if (rep.points.empty()) throw EmptySupportError("no feasible N in range");
  double s = 0;
  const std::size_t first = rep.points.size() / 2;
  for (std::size_t k = first; k < rep.points.size(); ++k) s += rep.points[k].remainder;
  rep.fitted_remainder = s / static_cast<double>(rep.points.size() - first);
  return rep;
}

}  // namespace sud
