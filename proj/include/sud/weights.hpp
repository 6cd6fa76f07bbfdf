#pragma once

// Coefficient schemes c(lambda) for the input state.
//
// A WeightVector stores raw nonnegative coefficients together with a squared
// normalization factor, so that c(lambda)^2 = factor * raw(lambda)^2. Raw
// integer weights stay exact; normalizing never takes a square root.

#include "sud/core.hpp"
#include "sud/partition.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

namespace sud {

template <class Scalar>
class WeightVector {
 public:
  using Map = std::map<Partition, Scalar, CanonicalOrder>;

  /// Zero entries are dropped. Throws InvalidArgument on shape mismatch or
  /// negative coefficients.
  WeightVector(int d, int level, Map entries, Scalar norm_factor_sq = Scalar(1))
      : d_(d), level_(level), norm_factor_sq_(std::move(norm_factor_sq)) {
    if (d < 2) throw InvalidArgument("d must be at least 2");
    if (level < 0) throw InvalidArgument("level must be nonnegative");
    for (auto& [lambda, c] : entries) {
      if (lambda.rows() != d || lambda.level() != level)
        throw InvalidArgument("weight entry " + lambda.to_string() + " does not match d=" +
                              std::to_string(d) + ", N=" + std::to_string(level));
      if (c < 0) throw InvalidArgument("negative coefficient at " + lambda.to_string());
      if (c != 0) entries_.emplace(lambda, std::move(c));
    }
  }

  int rows() const { return d_; }
  int level() const { return level_; }
  bool empty() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }
  const Map& entries() const { return entries_; }

  Scalar raw(const Partition& lambda) const {
    auto it = entries_.find(lambda);
    return it == entries_.end() ? Scalar(0) : it->second;
  }

  const Scalar& norm_factor_squared() const { return norm_factor_sq_; }

  /// sum of raw(lambda)^2.
  Scalar raw_squared_norm() const {
    Scalar s = 0;
    for (const auto& [lambda, c] : entries_) s += c * c;
    return s;
  }

  /// c(lambda)^2 including the normalization factor.
  Scalar squared_coefficient(const Partition& lambda) const {
    const Scalar c = raw(lambda);
    return norm_factor_sq_ * c * c;
  }

  Scalar squared_norm() const { return norm_factor_sq_ * raw_squared_norm(); }

  bool is_normalized() const {
    if constexpr (std::is_floating_point_v<Scalar>) {
      return std::abs(squared_norm() - 1) <= 1e-12;
    } else {
      return squared_norm() == 1;
    }
  }

  /// Normalized coefficient as a double (needs a square root).
  double coefficient(const Partition& lambda) const {
    return std::sqrt(static_cast<double>(to_plain_double(norm_factor_sq_))) *
           to_plain_double(raw(lambda));
  }

  WeightVector scaled(const Scalar& k) const {
    Map m;
    for (const auto& [lambda, c] : entries_) m.emplace(lambda, c * k);
    return WeightVector(d_, level_, std::move(m), norm_factor_sq_);
  }

  static double to_plain_double(const Scalar& v) {
    if constexpr (std::is_floating_point_v<Scalar>) {
      return static_cast<double>(v);
    } else {
      return v.template convert_to<double>();
    }
  }

 private:
  int d_;
  int level_;
  Map entries_;
  Scalar norm_factor_sq_;
};

using ExactWeights = WeightVector<Rational>;
using FloatWeights = WeightVector<double>;

/// Sets the normalization factor so that sum c^2 = 1. Throws EmptySupportError
/// when every coefficient is zero.
template <class Scalar>
WeightVector<Scalar> normalize(const WeightVector<Scalar>& raw) {
  if (raw.empty())
    throw EmptySupportError("cannot normalize an all-zero weight vector (d=" +
                            std::to_string(raw.rows()) + ", N=" + std::to_string(raw.level()) + ")");
  return WeightVector<Scalar>(raw.rows(), raw.level(), raw.entries(),
                              Scalar(1) / raw.raw_squared_norm());
}

/// Exact copy of float weights: every double is a dyadic rational.
inline ExactWeights to_exact(const FloatWeights& w) {
  ExactWeights::Map m;
  for (const auto& [lambda, c] : w.entries()) m.emplace(lambda, Rational(c));
  return ExactWeights(w.rows(), w.level(), std::move(m), Rational(w.norm_factor_squared()));
}

inline FloatWeights to_float(const ExactWeights& w) {
  FloatWeights::Map m;
  for (const auto& [lambda, c] : w.entries()) m.emplace(lambda, to_double(c));
  return FloatWeights(w.rows(), w.level(), std::move(m), to_double(w.norm_factor_squared()));
}

/// prod_i p_i over the gap vector; zero exactly when lambda is not strict.
inline BigInt product_gap_weight(const Partition& lambda) { return lambda.gaps().product(); }

/// (prod_i p_i)^alpha, and 0 off the strict set for every alpha (so alpha = 0
/// is the uniform scheme on strict partitions).
inline double power_gap_weight(const Partition& lambda, double alpha) {
  if (alpha < 0) throw InvalidArgument("power exponent must be nonnegative");
  const BigInt prod = product_gap_weight(lambda);
  if (prod == 0) return 0.0;
  return std::pow(prod.convert_to<double>(), alpha);
}

inline BigInt power_gap_weight_exact(const Partition& lambda, unsigned alpha) {
  const BigInt prod = product_gap_weight(lambda);
  if (prod == 0) return 0;
  return boost::multiprecision::pow(prod, alpha);
}

/// Raw product-of-gaps weights on all level-N partitions (support = strict set).
inline ExactWeights product_scheme(int d, int n) {
  ExactWeights::Map m;
  for (const auto& lambda : enumerate_partitions(d, n, PartitionFilter::kStrict))
    m.emplace(lambda, Rational(product_gap_weight(lambda)));
  return ExactWeights(d, n, std::move(m));
}

inline ExactWeights power_scheme_exact(int d, int n, unsigned alpha) {
  ExactWeights::Map m;
  for (const auto& lambda : enumerate_partitions(d, n, PartitionFilter::kStrict))
    m.emplace(lambda, Rational(power_gap_weight_exact(lambda, alpha)));
  return ExactWeights(d, n, std::move(m));
}

/// Float fallback for non-integer exponents; values carry ~1e-15 relative error.
inline FloatWeights power_scheme_float(int d, int n, double alpha) {
  FloatWeights::Map m;
  for (const auto& lambda : enumerate_partitions(d, n, PartitionFilter::kStrict))
    m.emplace(lambda, power_gap_weight(lambda, alpha));
  return FloatWeights(d, n, std::move(m));
}

inline ExactWeights uniform_scheme(int d, int n) { return power_scheme_exact(d, n, 0); }

// ---------------------------------------------------------------------------
// Scheme specification strings: product | uniform | power:<a> | optimal[:strict|:full] | file:<path>

enum class SchemeKind { kProduct, kUniform, kPower, kOptimal, kFile };
enum class Support { kFull, kStrict };

struct SchemeSpec {
  SchemeKind kind = SchemeKind::kProduct;
  double alpha = 1.0;
  std::optional<unsigned> integer_alpha;  // set when alpha is a nonnegative integer
  Support support = Support::kFull;       // optimal only
  std::string path;                       // file only
  std::string text;
};

inline SchemeSpec parse_scheme(const std::string& text) {
  SchemeSpec spec;
  spec.text = text;
  if (text == "product") {
    spec.kind = SchemeKind::kProduct;
  } else if (text == "uniform") {
    spec.kind = SchemeKind::kUniform;
    spec.alpha = 0.0;
    spec.integer_alpha = 0;
  } else if (text.rfind("power:", 0) == 0) {
    spec.kind = SchemeKind::kPower;
    const std::string a = text.substr(6);
    if (a.empty()) throw InvalidArgument("missing exponent in scheme '" + text + "'");
    if (a.find_first_of(".eE") == std::string::npos) {
      const Rational q = parse_fraction(a);
      if (q < 0) throw InvalidArgument("negative exponent in scheme '" + text + "'");
      spec.alpha = to_double(q);
      if (boost::multiprecision::denominator(q) == 1)
        spec.integer_alpha = boost::multiprecision::numerator(q).convert_to<unsigned>();
    } else {
      std::size_t used = 0;
      try {
        spec.alpha = std::stod(a, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != a.size() || !(spec.alpha >= 0))
        throw InvalidArgument("bad exponent in scheme '" + text + "'");
      if (spec.alpha == std::floor(spec.alpha) && spec.alpha < 1e6)
        spec.integer_alpha = static_cast<unsigned>(spec.alpha);
    }
  } else if (text == "optimal" || text == "optimal:full") {
    spec.kind = SchemeKind::kOptimal;
    spec.support = Support::kFull;
  } else if (text == "optimal:strict") {
    spec.kind = SchemeKind::kOptimal;
    spec.support = Support::kStrict;
  } else if (text.rfind("file:", 0) == 0 && text.size() > 5) {
    spec.kind = SchemeKind::kFile;
    spec.path = text.substr(5);
  } else {
    throw InvalidArgument("unknown scheme '" + text + "'");
  }
  return spec;
}

// ---------------------------------------------------------------------------
// JSON scheme files: {"d":..,"N":..,"entries":[{"parts":[...],"weight":"num/den"}]}
// or a bare array of entries.

inline nlohmann::ordered_json weights_to_json(const ExactWeights& w) {
  nlohmann::ordered_json j;
  j["d"] = w.rows();
  j["N"] = w.level();
  j["entries"] = nlohmann::ordered_json::array();
  for (const auto& [lambda, c] : w.entries()) {
    nlohmann::ordered_json e;
    e["parts"] = lambda.as_vector();
    e["weight"] = to_fraction_string(c);
    j["entries"].push_back(std::move(e));
  }
  return j;
}

inline ExactWeights weights_from_json(const nlohmann::json& j, int d, int n) {
  const nlohmann::json* entries = &j;
  if (j.is_object()) {
    if (j.contains("d") && j.at("d").get<int>() != d)
      throw InvalidArgument("weight file is for d=" + std::to_string(j.at("d").get<int>()));
    if (j.contains("N") && j.at("N").get<int>() != n)
      throw InvalidArgument("weight file is for N=" + std::to_string(j.at("N").get<int>()));
    if (!j.contains("entries")) throw InvalidArgument("weight file has no 'entries'");
    entries = &j.at("entries");
  }
  if (!entries->is_array()) throw InvalidArgument("weight entries must be an array");
  ExactWeights::Map m;
  for (const auto& e : *entries) {
    if (!e.contains("parts") || !e.contains("weight"))
      throw InvalidArgument("weight entry needs 'parts' and 'weight'");
    auto lambda = Partition::from_parts(e.at("parts").get<std::vector<int>>());
    const auto& wv = e.at("weight");
    Rational c = wv.is_string() ? parse_fraction(wv.get<std::string>())
                                : (wv.is_number_integer() ? Rational(wv.get<long long>())
                                                          : Rational(wv.get<double>()));
    if (!m.emplace(lambda, c).second)
      throw InvalidArgument("duplicate weight entry " + lambda.to_string());
  }
  return ExactWeights(d, n, std::move(m));
}

inline ExactWeights load_weights_file(const std::string& path, int d, int n) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open weight file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("malformed weight file '" + path + "': " + e.what());
  }
  return weights_from_json(j, d, n);
}

}  // namespace sud
