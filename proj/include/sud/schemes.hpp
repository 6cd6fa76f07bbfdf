#pragma once

// Turns a scheme specification string into concrete weights for one (d, N).

#include "sud/core.hpp"
#include "sud/risk_engine.hpp"
#include "sud/spectral_optimizer.hpp"
#include "sud/weights.hpp"

#include <variant>

namespace sud {

using AnyWeights = std::variant<ExactWeights, FloatWeights>;

struct ResolveOptions {
  PowerIterationOptions eigen{};
};

/// Exact weights whenever the scheme allows it (product, uniform, integer
/// powers, files); float weights for fractional powers and the spectral optimum.
inline AnyWeights resolve_scheme(const SchemeSpec& spec, int d, int n, const ResolveOptions& opt = {}) {
  if (d < 2) throw InvalidArgument("d must be at least 2");
  if (n < 0) throw InvalidArgument("N must be nonnegative");
  switch (spec.kind) {
    case SchemeKind::kProduct:
      return product_scheme(d, n);
    case SchemeKind::kUniform:
      return uniform_scheme(d, n);
    case SchemeKind::kPower:
      if (spec.integer_alpha) return power_scheme_exact(d, n, *spec.integer_alpha);
      return power_scheme_float(d, n, spec.alpha);
    case SchemeKind::kOptimal:
      return optimal_scheme(d, n, spec.support, opt.eigen).eigvec;
    case SchemeKind::kFile:
      return load_weights_file(spec.path, d, n);
  }
  throw InvalidArgument("unhandled scheme kind");
}

inline bool weights_empty(const AnyWeights& w) {
  return std::visit([](const auto& x) { return x.empty(); }, w);
}

inline double any_float_risk(int d, int n, const AnyWeights& w, unsigned workers = 1) {
  return std::visit([&](const auto& x) { return float_risk(d, n, x, workers); }, w);
}

/// Exact risk; float weights are converted exactly (they are dyadic rationals).
inline RiskBreakdown any_exact_risk(int d, int n, const AnyWeights& w, unsigned workers = 1) {
  if (const auto* e = std::get_if<ExactWeights>(&w)) return exact_risk(d, n, *e, workers);
  return exact_risk(d, n, to_exact(std::get<FloatWeights>(w)), workers);
}

}  // namespace sud
