#pragma once

// Independent check of the risk formula: characters are evaluated as Schur
// polynomials on the maximal torus and Haar integrals of class functions are
// computed by Weyl integration on a tensor trapezoidal grid.
//
// Nothing here uses the branching rules of rep_combinatorics: the character of
// lambda (x) box is formed as the pointwise product chi_lambda * chi_box.

#include "sud/core.hpp"
#include "sud/detail/parallel.hpp"
#include "sud/partition.hpp"
#include "sud/weights.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace sud {

using Complex = std::complex<double>;

/// Conjugacy class of SU(d): d-1 free angles; the last eigenphase is minus
/// their sum so the determinant is 1.
class TorusPoint {
 public:
  static TorusPoint from_angles(std::vector<double> angles) {
    if (angles.empty()) throw InvalidArgument("torus point needs d-1 >= 1 angles");
    return TorusPoint(std::move(angles));
  }

  static TorusPoint identity(int d) { return TorusPoint(std::vector<double>(static_cast<std::size_t>(d - 1), 0.0)); }

  int rank() const { return static_cast<int>(phases_.size()); }
  const std::vector<double>& phases() const { return phases_; }

  std::vector<Complex> eigenvalues() const {
    std::vector<Complex> z;
    for (double t : phases_) z.push_back(std::polar(1.0, t));
    return z;
  }

 private:
  explicit TorusPoint(std::vector<double> angles) : phases_(std::move(angles)) {
    double s = 0;
    for (double t : phases_) s += t;
    phases_.push_back(-s);
  }
  std::vector<double> phases_;
};

/// Eigenphases closer than this (on the circle) use the confluent path.
inline constexpr double kConfluenceThreshold = 1e-8;

enum class CharacterPath { kWeylRatio, kJacobiTrudi };

namespace detail {

inline Complex determinant(std::vector<Complex> a, int n) {
  Complex det = 1;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    if (std::abs(a[piv * n + col]) == 0) return 0;
    if (piv != col) {
      for (int k = 0; k < n; ++k) std::swap(a[col * n + k], a[piv * n + k]);
      det = -det;
    }
    det *= a[col * n + col];
    for (int r = col + 1; r < n; ++r) {
      const Complex f = a[r * n + col] / a[col * n + col];
      for (int k = col; k < n; ++k) a[r * n + k] -= f * a[col * n + k];
    }
  }
  return det;
}

inline double circle_distance(double a, double b) {
  const double two_pi = 2 * std::numbers::pi;
  double t = std::fmod(std::abs(a - b), two_pi);
  return std::min(t, two_pi - t);
}

inline bool near_confluent(const TorusPoint& t) {
  const auto& ph = t.phases();
  for (std::size_t i = 0; i < ph.size(); ++i)
    for (std::size_t j = i + 1; j < ph.size(); ++j)
      if (circle_distance(ph[i], ph[j]) < kConfluenceThreshold) return true;
  return false;
}

}  // namespace detail

/// s_lambda(z) = det(z_i^{lambda_j + d - j}) / det(z_i^{d - j}).
inline Complex schur_weyl_ratio(const Partition& lambda, const TorusPoint& t) {
  const int d = lambda.rows();
  const auto z = t.eigenvalues();
  std::vector<Complex> num(static_cast<std::size_t>(d * d));
  Complex vandermonde = 1;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) num[i * d + j] = std::pow(z[i], lambda[j] + d - 1 - j);
    for (int j = i + 1; j < d; ++j) vandermonde *= z[i] - z[j];
  }
  return detail::determinant(std::move(num), d) / vandermonde;
}

/// Jacobi-Trudi: s_lambda = det(h_{lambda_i - i + j}); division free, so it
/// stays finite at coincident eigenvalues.
inline Complex schur_jacobi_trudi(const Partition& lambda, const TorusPoint& t) {
  const int d = lambda.rows();
  const auto z = t.eigenvalues();
  const int top = lambda[0] + d;
  // h[k] = complete homogeneous symmetric polynomial of degree k in z.
  std::vector<Complex> h(static_cast<std::size_t>(top + 1), 0.0);
  h[0] = 1;
  for (const Complex& zi : z)
    for (int k = 1; k <= top; ++k) h[k] += zi * h[k - 1];
  std::vector<Complex> m(static_cast<std::size_t>(d * d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const int k = lambda[i] - i + j;
      m[i * d + j] = (k < 0 || k > top) ? Complex(0) : h[k];
    }
  return detail::determinant(std::move(m), d);
}

/// Character of lambda at t. Uses the Weyl ratio away from confluence and the
/// Jacobi-Trudi determinant otherwise. Throws NumericalInstabilityError when
/// neither yields a finite value.
inline Complex schur_eval(const Partition& lambda, const TorusPoint& t, CharacterPath* used = nullptr) {
  if (t.phases().size() != static_cast<std::size_t>(lambda.rows()))
    throw InvalidArgument("torus point rank does not match partition rows");
  auto finite = [](Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); };
  if (!detail::near_confluent(t)) {
    const Complex v = schur_weyl_ratio(lambda, t);
    if (finite(v)) {
      if (used) *used = CharacterPath::kWeylRatio;
      return v;
    }
  }
  const Complex v = schur_jacobi_trudi(lambda, t);
  if (!finite(v)) throw NumericalInstabilityError("character evaluation failed at " + lambda.to_string());
  if (used) *used = CharacterPath::kJacobiTrudi;
  return v;
}

/// Tensor trapezoidal rule on the (d-1)-torus with weights
/// |prod_{i<j} (z_i - z_j)|^2 / (d! M^{d-1}). Integrates a trigonometric
/// polynomial exactly when each angle's frequencies satisfy |k| < M. For
/// chi_mu * conj(chi_nu) that holds when M > |mu| + |nu| + 2(d-1).
struct QuadratureRule {
  int d = 0;
  int resolution = 0;
  std::vector<TorusPoint> nodes;
  std::vector<double> weights;

  double total_weight() const {
    detail::KahanSum s;
    for (double w : weights) s.add(w);
    return s.value();
  }
};

inline QuadratureRule haar_quadrature(int d, int resolution) {
  if (d < 2) throw InvalidArgument("d must be at least 2");
  if (resolution < 1) throw InvalidArgument("resolution must be at least 1");
  QuadratureRule rule;
  rule.d = d;
  rule.resolution = resolution;
  double norm = 1;
  for (int k = 2; k <= d; ++k) norm *= k;
  norm *= std::pow(static_cast<double>(resolution), d - 1);

  std::vector<int> idx(static_cast<std::size_t>(d - 1), 0);
  const double step = 2 * std::numbers::pi / resolution;
  while (true) {
    std::vector<double> angles;
    for (int k : idx) angles.push_back(k * step);
    auto t = TorusPoint::from_angles(std::move(angles));
    const auto z = t.eigenvalues();
    double dens = 1;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) dens *= std::norm(z[i] - z[j]);
    rule.nodes.push_back(std::move(t));
    rule.weights.push_back(dens / norm);
    int pos = 0;
    while (pos < d - 1 && ++idx[pos] == resolution) idx[pos++] = 0;
    if (pos == d - 1) break;
  }
  return rule;
}

/// Smallest resolution that integrates products of two level-`level` characters exactly.
inline int minimal_resolution(int d, int level) { return 2 * level + 2 * (d - 1) + 1; }

/// Default grid: 4(N + d) points per angle.
inline int default_resolution(int d, int n) { return 4 * (n + d); }

/// Values of chi_lambda at every node.
inline std::vector<Complex> character_table(const Partition& lambda, const QuadratureRule& rule) {
  std::vector<Complex> v;
  v.reserve(rule.nodes.size());
  for (const auto& t : rule.nodes) v.push_back(schur_eval(lambda, t));
  return v;
}

inline Complex integrate_pair(const std::vector<Complex>& a, const std::vector<Complex>& b, const QuadratureRule& rule) {
  Complex s = 0;
  detail::KahanSum re, im;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const Complex v = rule.weights[k] * a[k] * std::conj(b[k]);
    re.add(v.real());
    im.add(v.imag());
  }
  s = Complex(re.value(), im.value());
  return s;
}

/// Labels equal modulo full columns.
inline bool equivalent_irreps(const Partition& a, const Partition& b) {
  if (a.rows() != b.rows()) return false;
  const int sa = a[a.rows() - 1], sb = b[b.rows() - 1];
  for (int i = 0; i < a.rows(); ++i)
    if (a[i] - sa != b[i] - sb) return false;
  return true;
}

/// max |<chi_a, chi_b> - delta_{a == b}| over all pairs of the given labels.
inline double orthonormality_defect(const std::vector<Partition>& labels, const QuadratureRule& rule,
                                    unsigned workers = 1) {
  const auto tables = detail::parallel_map<std::vector<Complex>>(
      labels.size(), workers, [&](std::size_t k) { return character_table(labels[k], rule); });
  double worst = 0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = i; j < labels.size(); ++j) {
      const double expected = equivalent_irreps(labels[i], labels[j]) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(integrate_pair(tables[i], tables[j], rule) - expected));
    }
  return worst;
}

/// Reproducible random torus points.
inline std::vector<TorusPoint> random_torus_points(int d, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::vector<TorusPoint> pts;
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<double> a;
    for (int j = 0; j < d - 1; ++j) a.push_back(angle(rng));
    pts.push_back(TorusPoint::from_angles(std::move(a)));
  }
  return pts;
}

struct QuadratureRiskOptions {
  int resolution = 0;  // 0 selects default_resolution(d, N)
  double self_test_tol = 1e-9;
  unsigned workers = 1;
};

/// R = 1 - (1/d^2) * integral |sum_lambda c(lambda) chi_lambda|^2 |chi_box|^2 dmu,
/// with the weights rescaled to unit norm. Before integrating, the rule is
/// checked on the orthonormality of all level-(N+1) characters, which are
/// exactly the terms the integrand expands into; a failing check raises
/// ResolutionTooLowError with a suggested resolution.
template <class Scalar>
double quadrature_risk(int d, int n, const WeightVector<Scalar>& w, QuadratureRiskOptions opt = {}) {
  if (w.rows() != d || w.level() != n) throw InvalidArgument("weights do not match (d, N)");
  if (w.empty()) throw EmptySupportError("weights have empty support");
  const int resolution = opt.resolution > 0 ? opt.resolution : default_resolution(d, n);
  const auto rule = haar_quadrature(d, resolution);

  const double defect = orthonormality_defect(enumerate_partitions(d, n + 1), rule, opt.workers);
  if (!(defect <= opt.self_test_tol))
    throw ResolutionTooLowError("quadrature resolution " + std::to_string(resolution) +
                                    " fails the character orthonormality self-test (defect " +
                                    std::to_string(defect) + ")",
                                std::max(default_resolution(d, n), minimal_resolution(d, n + 1)));

  std::vector<std::pair<Partition, double>> coeffs;
  double peak = 0;
  for (const auto& [lambda, c] : w.entries()) peak = std::max(peak, WeightVector<Scalar>::to_plain_double(c));
  double norm2 = 0;
  for (const auto& [lambda, c] : w.entries()) {
    double v;
    if constexpr (std::is_floating_point_v<Scalar>) {
      v = c / peak;
    } else {
      v = to_double(c / Rational(peak));
    }
    coeffs.emplace_back(lambda, v);
    norm2 += v * v;
  }
  const auto box = Partition::row(d, 1);
  const auto values = detail::parallel_map<double>(rule.nodes.size(), opt.workers, [&](std::size_t k) {
    const auto& t = rule.nodes[k];
    Complex s = 0;
    for (const auto& [lambda, c] : coeffs) s += c * schur_eval(lambda, t);
    return rule.weights[k] * std::norm(s) * std::norm(schur_eval(box, t));
  });
  detail::KahanSum fidelity;
  for (double v : values) fidelity.add(v);
  return 1.0 - fidelity.value() / (norm2 * d * d);
}

}  // namespace sud
