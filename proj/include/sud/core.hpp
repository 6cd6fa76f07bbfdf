#pragma once

// Shared numeric types and the error hierarchy used across the library.

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sud {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Malformed input: not a partition, level mismatch, d < 2, ...
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A coefficient scheme or column set has no support (e.g. P_N is empty).
class EmptySupportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A sum that must be nonzero is empty (degenerate N for diagnostics, empty lattice).
class EmptySumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Character evaluation failed on both the determinant and the confluent path.
class NumericalInstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature grid too coarse for the requested integrand.
class ResolutionTooLowError : public std::runtime_error {
 public:
  ResolutionTooLowError(const std::string& what, int suggested)
      : std::runtime_error(what), suggested_resolution_(suggested) {}
  int suggested_resolution() const noexcept { return suggested_resolution_; }

 private:
  int suggested_resolution_;
};

/// Iterative eigen-solve hit its cap; carries the best iterate seen.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double rayleigh, double residual,
                   std::vector<double> best)
      : std::runtime_error(what),
        rayleigh_(rayleigh),
        residual_(residual),
        best_(std::move(best)) {}

  double rayleigh() const noexcept { return rayleigh_; }
  double residual() const noexcept { return residual_; }
  const std::vector<double>& best_iterate() const noexcept { return best_; }

 private:
  double rayleigh_;
  double residual_;
  std::vector<double> best_;
};

/// "num/den" with den always printed, e.g. "10/1".
inline std::string to_fraction_string(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" +
         boost::multiprecision::denominator(q).str();
}

/// Parses "num/den" or a bare integer. Throws InvalidArgument.
inline Rational parse_fraction(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(BigInt(text));
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw InvalidArgument("zero denominator in '" + text + "'");
    return Rational(num, den);
  } catch (const InvalidArgument&) {
    throw;
  } catch (const std::exception&) {
    throw InvalidArgument("not a rational number: '" + text + "'");
  }
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace sud
