#pragma once

// Exact risk of a coefficient scheme under the fidelity cost:
//
//   R = 1 - sum_{|mu| = N+1} ( sum_{i in S(mu)} c(mu - e_i) )^2 / d^2
//
// evaluated child-first: enumerate mu at level N+1 and gather the parents
// through the removable rows. Weights may be unnormalized; the risk is then
// 1 - Q(raw) / (d^2 * |raw|^2), which is scale invariant.

#include "sud/core.hpp"
#include "sud/detail/parallel.hpp"
#include "sud/partition.hpp"
#include "sud/rep_combinatorics.hpp"
#include "sud/weights.hpp"

#include <map>
#include <string>
#include <vector>

namespace sud {

struct RiskBreakdown {
  int d = 0;
  int level = 0;
  Rational risk;
  /// (sum_{i in S(mu)} raw(mu - e_i))^2 for every mu at level N+1, raw scale.
  std::map<Partition, Rational, CanonicalOrder> numerator_terms;
  Rational numerator;         // sum of numerator_terms
  Rational raw_squared_norm;  // sum raw^2

  double risk_value() const { return to_double(risk); }
};

namespace detail {

template <class Scalar>
Scalar parent_sum(const Partition& child, const WeightVector<Scalar>& w) {
  Scalar s = 0;
  for (int i : removable_rows(child)) s += w.raw(*child.remove_box(i));
  return s;
}

template <class Scalar>
void check_level(int d, int n, const WeightVector<Scalar>& w) {
  if (d < 2) throw InvalidArgument("d must be at least 2");
  if (w.rows() != d || w.level() != n)
    throw InvalidArgument("weights are for d=" + std::to_string(w.rows()) + ", N=" +
                          std::to_string(w.level()) + " but d=" + std::to_string(d) +
                          ", N=" + std::to_string(n) + " was requested");
  if (w.empty())
    throw EmptySupportError("weights have empty support at d=" + std::to_string(d) +
                            ", N=" + std::to_string(n));
}

}  // namespace detail

inline RiskBreakdown exact_risk(int d, int n, const ExactWeights& w, unsigned workers = 1) {
  detail::check_level(d, n, w);
  const auto children = enumerate_partitions(d, n + 1);
  const auto sums = detail::parallel_map<Rational>(children.size(), workers, [&](std::size_t k) {
    const Rational s = detail::parent_sum(children[k], w);
    return Rational(s * s);
  });

  RiskBreakdown out;
  out.d = d;
  out.level = n;
  for (std::size_t k = 0; k < children.size(); ++k) {
    out.numerator += sums[k];
    out.numerator_terms.emplace(children[k], sums[k]);
  }
  out.raw_squared_norm = w.raw_squared_norm();
  out.risk = 1 - out.numerator / (Rational(d * d) * out.raw_squared_norm);
  return out;
}

inline RiskBreakdown exact_risk(const ExactWeights& w, unsigned workers = 1) {
  return exact_risk(w.rows(), w.level(), w, workers);
}

/// Double-precision fast path. Children are reduced with Kahan summation in
/// canonical order, so the value is identical for any worker count.
template <class Scalar>
double float_risk(int d, int n, const WeightVector<Scalar>& w, unsigned workers = 1) {
  detail::check_level(d, n, w);
  FloatWeights fw = [&] {
    if constexpr (std::is_same_v<Scalar, double>) {
      return w;
    } else {
      // Rescale so that the largest raw weight is 1 before rounding.
      Rational peak = 0;
      for (const auto& [lambda, c] : w.entries())
        if (c > peak) peak = c;
      return to_float(w.scaled(1 / peak));
    }
  }();
  const auto children = enumerate_partitions(d, n + 1);
  const auto sums = detail::parallel_map<double>(children.size(), workers, [&](std::size_t k) {
    const double s = detail::parent_sum(children[k], fw);
    return s * s;
  });
  detail::KahanSum num;
  for (double v : sums) num.add(v);
  detail::KahanSum norm;
  for (const auto& [lambda, c] : fw.entries()) norm.add(c * c);
  return 1.0 - num.value() / (static_cast<double>(d) * d * norm.value());
}

// ---------------------------------------------------------------------------
// Expansion of the product-scheme ratio around its leading term.

/// All quantities are computed from their raw definitions over mu at level
/// N+1 with p = gaps(mu) and
///   r_mu(i) = -p_{i} + [i > 0] (p_{i-1} - p_{i,i-1}),   p_E = prod_{j not in E} p_j.
struct ExpansionDiagnostics {
  int d = 0;
  int level = 0;
  BigInt c_t;  // sum #S^2 prod p^2
  BigInt c_u;  // sum d #S prod p^2
  Rational t1, u1, t2, u2;

  Rational u2_minus_t2() const { return u2 - t2; }

  /// 1 - (1 + t1 + t2) / (1 + u1 + u2), using C_t = C_u. Equals the exact
  /// product-scheme risk.
  Rational expansion_risk() const { return 1 - (1 + t1 + t2) / (1 + u1 + u2); }
};

inline ExpansionDiagnostics expansion_diagnostics(int d, int n) {
  if (d < 2) throw InvalidArgument("d must be at least 2");
  if (n < 0) throw InvalidArgument("N must be nonnegative");
  ExpansionDiagnostics out;
  out.d = d;
  out.level = n;
  BigInt t1_num = 0, u1_num = 0, t2_num = 0, u2_num = 0;

  for (const auto& mu : enumerate_partitions(d, n + 1)) {
    const auto gaps = mu.gaps();
    const auto rows = removable_rows(mu);
    const long long size_s = static_cast<long long>(rows.size());

    auto p_without = [&](int a, int b) {
      BigInt prod = 1;
      for (int j = 0; j < d; ++j)
        if (j != a && j != b) prod *= gaps[j];
      return prod;
    };
    const BigInt p_all = gaps.product();
    const BigInt p_all_sq = p_all * p_all;

    BigInt r_sum = 0;
    BigInt r_sq_sum = 0;
    for (int i : rows) {
      BigInt r = -p_without(i, i);
      if (i > 0) r += p_without(i - 1, i - 1) - p_without(i, i - 1);
      r_sum += r;
      r_sq_sum += r * r;
    }
    out.c_t += size_s * size_s * p_all_sq;
    out.c_u += d * size_s * p_all_sq;
    t1_num += 2 * size_s * r_sum * p_all;
    u1_num += 2 * d * r_sum * p_all;
    t2_num += r_sum * r_sum;
    u2_num += d * r_sq_sum;
  }
  if (out.c_t == 0 || out.c_u == 0)
    throw EmptySumError("no strict partitions at level " + std::to_string(n + 1) +
                        " for d=" + std::to_string(d));
  out.t1 = Rational(t1_num, out.c_t);
  out.u1 = Rational(u1_num, out.c_u);
  out.t2 = Rational(t2_num, out.c_t);
  out.u2 = Rational(u2_num, out.c_u);
  return out;
}

// ---------------------------------------------------------------------------

/// Terms of the chain
///   Q/d^2 <= sum (#S/d) (sum_i c^2)/d <= sum (sum_i c^2)/d <= sum c^2 = 1
/// for the weights rescaled to unit norm.
struct CauchySchwarzWitness {
  Rational fidelity_term;  // Q / (d^2 |c|^2)
  Rational first_bound;    // after Cauchy-Schwarz on each inner sum
  Rational second_bound;   // after #S <= d
  Rational third_bound;    // each c^2 counted at most d times; equals 1 when Pieri-complete
  Rational slack;          // 1 - fidelity_term, i.e. the risk
  bool holds = false;
};

inline CauchySchwarzWitness cauchy_schwarz_bound_check(int d, int n, const ExactWeights& w) {
  detail::check_level(d, n, w);
  const Rational norm = w.raw_squared_norm();
  const Rational dd = d;
  Rational q = 0, first = 0, second = 0;
  for (const auto& mu : enumerate_partitions(d, n + 1)) {
    Rational s = 0, s2 = 0;
    const auto rows = removable_rows(mu);
    for (int i : rows) {
      const Rational c = w.raw(*mu.remove_box(i));
      s += c;
      s2 += c * c;
    }
    q += s * s;
    first += Rational(static_cast<long long>(rows.size())) * s2 / (dd * dd);
    second += s2 / dd;
  }
  CauchySchwarzWitness out;
  out.fidelity_term = q / (dd * dd * norm);
  out.first_bound = first / norm;
  out.second_bound = second / norm;
  out.third_bound = 1;
  out.slack = 1 - out.fidelity_term;
  out.holds = out.fidelity_term <= out.first_bound && out.first_bound <= out.second_bound &&
              out.second_bound <= out.third_bound && out.slack >= 0;
  return out;
}

}  // namespace sud
