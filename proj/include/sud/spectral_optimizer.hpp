#pragma once

// Risk-optimal coefficients. The numerator of the risk is |B c|^2 where B is
// the 0/1 parent incidence between level N+1 (rows) and level N (columns), so
// the best unit-norm scheme is the leading eigenvector of B^T B and the
// optimal risk is 1 - eigmax / d^2.

#include "sud/core.hpp"
#include "sud/detail/parallel.hpp"
#include "sud/partition.hpp"
#include "sud/rep_combinatorics.hpp"
#include "sud/risk_engine.hpp"
#include "sud/weights.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

namespace sud {

class IncidenceStructure {
 public:
  int d() const { return d_; }
  int level() const { return level_; }
  Support support() const { return support_; }
  const std::vector<Partition>& rows() const { return rows_; }
  const std::vector<Partition>& cols() const { return cols_; }

  std::size_t nonzeros() const { return row_cols_.size(); }

  std::span<const int> row_entries(std::size_t r) const {
    return {row_cols_.data() + row_ptr_[r], row_cols_.data() + row_ptr_[r + 1]};
  }
  std::span<const int> col_entries(std::size_t c) const {
    return {col_rows_.data() + col_ptr_[c], col_rows_.data() + col_ptr_[c + 1]};
  }
  int row_degree(std::size_t r) const { return static_cast<int>(row_ptr_[r + 1] - row_ptr_[r]); }
  int col_degree(std::size_t c) const { return static_cast<int>(col_ptr_[c + 1] - col_ptr_[c]); }

  bool related(std::size_t r, std::size_t c) const {
    auto e = row_entries(r);
    return std::find(e.begin(), e.end(), static_cast<int>(c)) != e.end();
  }

  /// y = B x
  void apply(std::span<const double> x, std::span<double> y) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      double s = 0;
      for (int c : row_entries(r)) s += x[c];
      y[r] = s;
    }
  }

  /// x = B^T y
  void apply_transpose(std::span<const double> y, std::span<double> x) const {
    for (std::size_t c = 0; c < cols_.size(); ++c) {
      double s = 0;
      for (int r : col_entries(c)) s += y[r];
      x[c] = s;
    }
  }

  friend IncidenceStructure build_incidence(int d, int n, Support support);

 private:
  int d_ = 0;
  int level_ = 0;
  Support support_ = Support::kFull;
  std::vector<Partition> rows_;
  std::vector<Partition> cols_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<int> row_cols_;
  std::vector<std::size_t> col_ptr_{0};
  std::vector<int> col_rows_;
};

/// Rows are all level-(N+1) partitions; columns are all level-N partitions
/// (kFull) or only the strict ones (kStrict, the ancilla-free regime).
inline IncidenceStructure build_incidence(int d, int n, Support support) {
  if (n < 0) throw InvalidArgument("N must be nonnegative");
  IncidenceStructure b;
  b.d_ = d;
  b.level_ = n;
  b.support_ = support;
  b.cols_ = enumerate_partitions(
      d, n, support == Support::kStrict ? PartitionFilter::kStrict : PartitionFilter::kAll);
  if (b.cols_.empty())
    throw EmptySupportError("no columns at d=" + std::to_string(d) + ", N=" + std::to_string(n) +
                            (support == Support::kStrict ? " (strict support)" : ""));
  b.rows_ = enumerate_partitions(d, n + 1);

  std::map<Partition, int, CanonicalOrder> col_index;
  for (std::size_t c = 0; c < b.cols_.size(); ++c) col_index.emplace(b.cols_[c], static_cast<int>(c));

  std::vector<std::vector<int>> by_col(b.cols_.size());
  for (std::size_t r = 0; r < b.rows_.size(); ++r) {
    for (int i : removable_rows(b.rows_[r])) {
      auto it = col_index.find(*b.rows_[r].remove_box(i));
      if (it == col_index.end()) continue;
      b.row_cols_.push_back(it->second);
      by_col[it->second].push_back(static_cast<int>(r));
    }
    b.row_ptr_.push_back(b.row_cols_.size());
  }
  for (auto& rows : by_col) {
    b.col_rows_.insert(b.col_rows_.end(), rows.begin(), rows.end());
    b.col_ptr_.push_back(b.col_rows_.size());
  }
  return b;
}

struct SpectralResult {
  int d = 0;
  int level = 0;
  double eigmax = 0;
  FloatWeights eigvec{2, 0, {}};
  long iterations = 0;
  double residual = 0;  // |B^T B v - eigmax v|
  int components = 1;   // connected components of the column graph
  bool degenerate = false;

  double optimal_risk() const { return 1.0 - eigmax / (static_cast<double>(d) * d); }
};

struct PowerIterationOptions {
  double tol = 1e-12;
  long max_iterations = 1'000'000;
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  KahanSum s;
  for (std::size_t i = 0; i < a.size(); ++i) s.add(a[i] * b[i]);
  return s.value();
}

// Column components of the graph where two columns are adjacent when they
// share a row.
inline std::vector<int> column_components(const IncidenceStructure& b, int& count) {
  std::vector<int> comp(b.cols().size(), -1);
  count = 0;
  std::vector<int> stack;
  for (std::size_t start = 0; start < comp.size(); ++start) {
    if (comp[start] >= 0) continue;
    comp[start] = count;
    stack.push_back(static_cast<int>(start));
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      for (int r : b.col_entries(c))
        for (int other : b.row_entries(r))
          if (comp[other] < 0) {
            comp[other] = count;
            stack.push_back(other);
          }
    }
    ++count;
  }
  return comp;
}

struct PowerOutcome {
  double rho = 0;
  double residual = 0;
  long iterations = 0;
  std::vector<double> v;
  bool converged = false;
};

// Power iteration on B^T B restricted to the columns in `mask`, started from
// the normalized indicator of the mask.
inline PowerOutcome power_iterate(const IncidenceStructure& b, const std::vector<char>& mask,
                                  const PowerIterationOptions& opt) {
  const std::size_t nc = b.cols().size();
  PowerOutcome best;
  std::vector<double> v(nc, 0.0), y(b.rows().size()), w(nc);
  double count = 0;
  for (std::size_t c = 0; c < nc; ++c)
    if (mask[c]) {
      v[c] = 1.0;
      ++count;
    }
  for (auto& x : v) x /= std::sqrt(count);

  double best_rel = INFINITY;
  for (long it = 1; it <= opt.max_iterations; ++it) {
    b.apply(v, y);
    b.apply_transpose(y, w);
    for (std::size_t c = 0; c < nc; ++c)
      if (!mask[c]) w[c] = 0.0;
    const double rho = dot(v, w);
    double res2 = 0;
    for (std::size_t c = 0; c < nc; ++c) {
      const double e = w[c] - rho * v[c];
      res2 += e * e;
    }
    const double res = std::sqrt(res2);
    const double rel = rho > 0 ? res / rho : INFINITY;
    if (rel < best_rel) {
      best_rel = rel;
      best.rho = rho;
      best.residual = res;
      best.iterations = it;
      best.v = v;
    }
    if (rho > 0 && res <= opt.tol * rho) {
      best.converged = true;
      return best;
    }
    const double norm = std::sqrt(dot(w, w));
    if (norm == 0) break;  // B annihilates the start vector
    for (std::size_t c = 0; c < nc; ++c) v[c] = w[c] / norm;
  }
  best.iterations = opt.max_iterations;
  return best;
}

}  // namespace detail

/// Leading eigenpair of B^T B by power iteration from the all-ones vector.
/// B^T B is never formed. Disconnected column components are solved
/// separately and the component with the largest eigenvalue is reported;
/// `degenerate` flags a tie within tolerance. Throws ConvergenceError when the
/// residual certificate |B^T B v - rho v| <= tol * rho is not met in time.
inline SpectralResult max_eigenpair(const IncidenceStructure& b, PowerIterationOptions opt = {}) {
  if (!(opt.tol > 0)) throw InvalidArgument("tolerance must be positive");
  if (b.cols().empty()) throw EmptySupportError("empty incidence structure");

  int count = 0;
  const auto comp = detail::column_components(b, count);
  std::vector<detail::PowerOutcome> outcomes;
  for (int k = 0; k < count; ++k) {
    std::vector<char> mask(comp.size());
    for (std::size_t c = 0; c < comp.size(); ++c) mask[c] = comp[c] == k;
    outcomes.push_back(detail::power_iterate(b, mask, opt));
  }
  std::size_t top = 0;
  for (std::size_t k = 1; k < outcomes.size(); ++k)
    if (outcomes[k].rho > outcomes[top].rho) top = k;
  const auto& o = outcomes[top];
  if (!o.converged)
    throw ConvergenceError("power iteration did not reach the residual target after " +
                               std::to_string(opt.max_iterations) + " iterations",
                           o.rho, o.residual, o.v);

  SpectralResult out;
  out.d = b.d();
  out.level = b.level();
  out.eigmax = o.rho;
  out.iterations = o.iterations;
  out.residual = o.residual;
  out.components = count;
  for (std::size_t k = 0; k < outcomes.size(); ++k)
    if (k != top && std::abs(outcomes[k].rho - o.rho) <= opt.tol * o.rho) out.degenerate = true;

  FloatWeights::Map m;
  double norm2 = 0;
  for (std::size_t c = 0; c < o.v.size(); ++c) {
    const double x = std::max(0.0, o.v[c]);
    if (x > 0) m.emplace(b.cols()[c], x);
    norm2 += x * x;
  }
  out.eigvec = FloatWeights(b.d(), b.level(), std::move(m), 1.0 / norm2);
  return out;
}

inline SpectralResult optimal_scheme(int d, int n, Support support, PowerIterationOptions opt = {}) {
  return max_eigenpair(build_incidence(d, n, support), opt);
}

struct OptimalityGap {
  std::optional<Rational> product_risk;  // empty when the strict set is empty
  double optimal_risk = 0;               // full-support optimum
  SpectralResult spectral;

  std::optional<double> gap() const {
    if (!product_risk) return std::nullopt;
    return to_double(*product_risk) - optimal_risk;
  }
};

inline OptimalityGap optimality_gap(int d, int n, PowerIterationOptions opt = {}) {
  OptimalityGap out;
  out.spectral = optimal_scheme(d, n, Support::kFull, opt);
  out.optimal_risk = out.spectral.optimal_risk();
  const auto product = product_scheme(d, n);
  if (!product.empty()) out.product_risk = exact_risk(d, n, product).risk;
  return out;
}

}  // namespace sud
