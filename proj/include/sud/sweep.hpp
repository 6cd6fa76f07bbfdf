#pragma once

// Risk as a function of N, and the intercept fit that extracts the constant C
// from N^2 R(N) = C + O(1/N).

#include "sud/core.hpp"
#include "sud/detail/parallel.hpp"
#include "sud/schemes.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace sud {

struct LinearFit {
  double intercept = 0;
  double slope = 0;
  std::vector<int> levels;         // N values used
  std::vector<double> residuals;   // observed - fitted, per level
  double max_abs_residual() const {
    double m = 0;
    for (double r : residuals) m = std::max(m, std::abs(r));
    return m;
  }
};

/// Ordinary least squares of y against x; needs two distinct x values.
inline LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw InvalidArgument("fit needs two distinct abscissae");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) f.residuals.push_back(y[i] - (f.intercept + f.slope * x[i]));
  return f;
}

struct CurvePoint {
  int level = 0;
  std::optional<Rational> exact;  // absent for float-only schemes
  double risk = 0;
  double n2_risk = 0;
};

struct SkippedLevel {
  int level = 0;
  std::string reason;
};

struct RiskCurve {
  int d = 0;
  std::string scheme;
  std::vector<CurvePoint> points;
  std::vector<SkippedLevel> skipped;
  std::optional<LinearFit> fit;
};

struct CurveOptions {
  unsigned workers = 1;
  bool exact = true;  // exact rationals where the scheme has exact weights
  ResolveOptions resolve{};
};

/// Intercept of N^2 R against 1/N over the upper half of the points (by N).
inline LinearFit fit_constant(const std::vector<CurvePoint>& points) {
  const std::size_t first = points.size() / 2;
  std::vector<double> x, y;
  LinearFit f;
  for (std::size_t i = first; i < points.size(); ++i) {
    x.push_back(1.0 / points[i].level);
    y.push_back(points[i].n2_risk);
  }
  f = least_squares(x, y);
  for (std::size_t i = first; i < points.size(); ++i) f.levels.push_back(points[i].level);
  return f;
}

/// Sweeps N over [lo, hi]. Levels where the scheme has no support are recorded
/// in `skipped` instead of failing the sweep.
inline RiskCurve risk_curve(int d, int lo, int hi, const SchemeSpec& spec, const CurveOptions& opt = {}) {
  if (d < 2) throw InvalidArgument("d must be at least 2");
  if (lo < 0 || hi < lo) throw InvalidArgument("empty N range");
  struct Slot {
    std::optional<CurvePoint> point;
    std::string skip;
  };
  const auto slots = detail::parallel_map<Slot>(
      static_cast<std::size_t>(hi - lo + 1), opt.workers, [&](std::size_t k) {
        const int n = lo + static_cast<int>(k);
        Slot s;
        try {
          const auto w = resolve_scheme(spec, d, n, opt.resolve);
          if (weights_empty(w)) {
            s.skip = "empty support";
            return s;
          }
          CurvePoint p;
          p.level = n;
          if (opt.exact && std::holds_alternative<ExactWeights>(w)) {
            p.exact = exact_risk(d, n, std::get<ExactWeights>(w)).risk;
            p.risk = to_double(*p.exact);
          } else {
            p.risk = any_float_risk(d, n, w);
          }
          p.n2_risk = static_cast<double>(n) * n * p.risk;
          s.point = p;
        } catch (const EmptySupportError& e) {
          s.skip = e.what();
        }
        return s;
      });
  RiskCurve curve;
  curve.d = d;
  curve.scheme = spec.text;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    if (slots[k].point)
      curve.points.push_back(*slots[k].point);
    else
      curve.skipped.push_back({lo + static_cast<int>(k), slots[k].skip});
  }
  if (curve.points.size() >= 4) curve.fit = fit_constant(curve.points);
  return curve;
}

}  // namespace sud
