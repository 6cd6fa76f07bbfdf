#pragma once

// Dimensions, multiplicities and one-box branching for SU(d) irreps occurring
// in the N-fold tensor power of the defining representation.

#include "sud/core.hpp"
#include "sud/partition.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace sud {

/// Dimension of the irrep lambda via the Weyl dimension formula
/// prod_{i<j} (lambda_i - lambda_j + j - i) / (j - i).
inline BigInt weyl_dimension(const Partition& lambda) {
  const int d = lambda.rows();
  BigInt num = 1;
  BigInt den = 1;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      num *= lambda[i] - lambda[j] + j - i;
      den *= j - i;
    }
  }
  return num / den;
}

/// Number of standard Young tableaux of shape lambda (hook length formula),
/// which is the multiplicity of lambda in the N-fold tensor power.
inline BigInt syt_count(const Partition& lambda) {
  const auto cols = lambda.conjugate();
  BigInt hooks = 1;
  for (int i = 0; i < lambda.rows(); ++i) {
    for (int j = 0; j < lambda[i]; ++j) {
      const int arm = lambda[i] - j - 1;
      const int leg = cols[j] - i - 1;
      hooks *= arm + leg + 1;
    }
  }
  BigInt fact = 1;
  for (int k = 2; k <= lambda.level(); ++k) fact *= k;
  return fact / hooks;
}

struct PieriChild {
  int row;
  Partition child;
};

/// lambda (x) box = sum of lambda + e_i over the rows where a box can be added.
inline std::vector<PieriChild> pieri_add(const Partition& lambda) {
  std::vector<PieriChild> out;
  for (int i = 0; i < lambda.rows(); ++i)
    if (auto child = lambda.add_box(i)) out.push_back({i, *child});
  return out;
}

/// S(lambda'): rows i with lambda'_i > lambda'_{i+1} (lambda'_d = 0).
inline std::vector<int> removable_rows(const Partition& lambda) {
  std::vector<int> rows;
  for (int i = 0; i < lambda.rows(); ++i)
    if (lambda.remove_box(i)) rows.push_back(i);
  return rows;
}

struct IrrepInfo {
  BigInt dimension;
  BigInt multiplicity;
};

inline IrrepInfo irrep_info(const Partition& lambda) {
  return {weyl_dimension(lambda), syt_count(lambda)};
}

/// One JSON-lines record: {"d","parts","dim","mult"} with big values as decimal strings.
inline nlohmann::ordered_json irrep_record(const Partition& lambda) {
  const auto info = irrep_info(lambda);
  nlohmann::ordered_json j;
  j["d"] = lambda.rows();
  j["parts"] = lambda.as_vector();
  j["dim"] = info.dimension.str();
  j["mult"] = info.multiplicity.str();
  return j;
}

/// All records of one level, one compact JSON object per line, canonical order.
inline std::string level_table_jsonl(int d, int level) {
  std::string out;
  for (const auto& lambda : enumerate_partitions(d, level)) {
    out += irrep_record(lambda).dump();
    out += '\n';
  }
  return out;
}

}  // namespace sud
