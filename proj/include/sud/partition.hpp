#pragma once

// Partitions with at most d rows, as irrep labels of SU(d).
//
// A Partition always carries exactly d entries (trailing zeros included), so
// the number of rows doubles as the group rank. Rows are 0-based throughout.

#include "sud/core.hpp"

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sud {

/// Successive differences p_i = lambda_i - lambda_{i+1}, with lambda_d = 0.
class GapVector {
 public:
  explicit GapVector(std::vector<int> gaps) : gaps_(std::move(gaps)) {}

  std::span<const int> values() const { return gaps_; }
  int operator[](std::size_t i) const { return gaps_[i]; }
  std::size_t size() const { return gaps_.size(); }

  /// All gaps >= 1, i.e. lambda_1 > ... > lambda_d > 0.
  bool strict() const {
    for (int p : gaps_)
      if (p < 1) return false;
    return true;
  }

  /// sum_i (i+1) p_i, which equals the level of the partition.
  int weighted_sum() const {
    int s = 0;
    for (std::size_t i = 0; i < gaps_.size(); ++i) s += static_cast<int>(i + 1) * gaps_[i];
    return s;
  }

  BigInt product() const {
    BigInt prod = 1;
    for (int p : gaps_) prod *= p;
    return prod;
  }

 private:
  std::vector<int> gaps_;
};

class Partition {
 public:
  /// Validates a weakly decreasing tuple of nonnegative integers with d >= 1 entries.
  static Partition from_parts(std::vector<int> parts) {
    if (parts.empty()) throw InvalidArgument("partition needs at least one row");
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (parts[i] < 0) throw InvalidArgument("negative part in " + format(parts));
      if (i > 0 && parts[i] > parts[i - 1])
        throw InvalidArgument("parts not weakly decreasing in " + format(parts));
    }
    return Partition(std::move(parts));
  }

  /// (N, 0, ..., 0) with d rows.
  static Partition row(int d, int n) {
    std::vector<int> p(static_cast<std::size_t>(d), 0);
    p[0] = n;
    return from_parts(std::move(p));
  }

  int rows() const { return static_cast<int>(parts_.size()); }
  int level() const { return level_; }
  int operator[](std::size_t i) const { return parts_[i]; }
  std::span<const int> parts() const { return parts_; }
  const std::vector<int>& as_vector() const { return parts_; }

  GapVector gaps() const {
    std::vector<int> g(parts_.size());
    for (std::size_t i = 0; i < parts_.size(); ++i)
      g[i] = parts_[i] - (i + 1 < parts_.size() ? parts_[i + 1] : 0);
    return GapVector(std::move(g));
  }

  bool is_strict() const { return gaps().strict(); }

  /// lambda + e_row, if still a partition.
  std::optional<Partition> add_box(int row) const {
    if (row < 0 || row >= rows()) return std::nullopt;
    if (row > 0 && parts_[row - 1] == parts_[row]) return std::nullopt;
    auto p = parts_;
    ++p[row];
    return Partition(std::move(p));
  }

  /// lambda - e_row, if still a partition.
  std::optional<Partition> remove_box(int row) const {
    if (row < 0 || row >= rows()) return std::nullopt;
    const int below = row + 1 < rows() ? parts_[row + 1] : 0;
    if (parts_[row] <= below) return std::nullopt;
    auto p = parts_;
    --p[row];
    return Partition(std::move(p));
  }

  /// Column lengths lambda'_j for j < lambda_1.
  std::vector<int> conjugate() const {
    std::vector<int> c(parts_.empty() ? 0 : static_cast<std::size_t>(parts_[0]), 0);
    for (int len : parts_)
      for (int j = 0; j < len; ++j) ++c[j];
    return c;
  }

  std::string to_string() const { return format(parts_); }

  friend bool operator==(const Partition&, const Partition&) = default;
  friend auto operator<=>(const Partition& a, const Partition& b) { return a.parts_ <=> b.parts_; }

 private:
  explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (int v : parts_) level_ += v;
  }

  static std::string format(const std::vector<int>& parts) {
    std::string s = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(parts[i]);
    }
    return s + ")";
  }

  std::vector<int> parts_;
  int level_ = 0;
};

/// Canonical order: lexicographic descending, (N,0,..) first.
struct CanonicalOrder {
  bool operator()(const Partition& a, const Partition& b) const { return b < a; }
};

enum class PartitionFilter { kAll, kStrict };

/// All partitions of n with at most d rows, in canonical order. Strict mode
/// returns only lambda_1 > ... > lambda_d > 0.
inline std::vector<Partition> enumerate_partitions(int d, int n,
                                                   PartitionFilter filter = PartitionFilter::kAll) {
  if (d < 2) throw InvalidArgument("d must be at least 2");
  if (n < 0) throw InvalidArgument("level must be nonnegative");
  std::vector<Partition> out;
  std::vector<int> parts(static_cast<std::size_t>(d), 0);
  const bool strict = filter == PartitionFilter::kStrict;

  // Row k takes values from min(remaining, previous) downward; in strict mode
  // rows must leave room for the d-k-1 strictly smaller positive rows below.
  auto rec = [&](auto&& self, int k, int remaining, int cap) -> void {
    if (k == d - 1) {
      if (remaining > cap) return;
      if (strict && remaining < 1) return;
      parts[k] = remaining;
      out.push_back(Partition::from_parts(parts));
      return;
    }
    const int rows_left = d - k - 1;
    for (int v = std::min(remaining, cap); v >= 0; --v) {
      if (strict) {
        // Need rows below to be at most v-1, v-2, ... and at least rows_left, ..., 1.
        const int min_rest = rows_left * (rows_left + 1) / 2;
        const int max_rest = rows_left * (2 * (v - 1) - rows_left + 1) / 2;
        if (remaining - v < min_rest) continue;
        if (remaining - v > max_rest) break;
      } else if (remaining - v > v * rows_left) {
        break;
      }
      parts[k] = v;
      self(self, k + 1, remaining - v, strict ? v - 1 : v);
    }
  };
  rec(rec, 0, n, n);
  return out;
}

}  // namespace sud
