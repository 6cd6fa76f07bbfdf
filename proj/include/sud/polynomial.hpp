#pragma once

// Sparse multivariate polynomials with exact coefficients.

#include "sud/core.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace sud {

template <class Coef = Rational>
class MonomialPolynomial {
 public:
  using Exponents = std::vector<int>;
  using Terms = std::map<Exponents, Coef>;

  explicit MonomialPolynomial(int vars) : vars_(vars) {
    if (vars < 1) throw InvalidArgument("polynomial needs at least one variable");
  }

  static MonomialPolynomial constant(int vars, const Coef& c) {
    MonomialPolynomial p(vars);
    p.add_term(Exponents(static_cast<std::size_t>(vars), 0), c);
    return p;
  }

  /// x_k (0-based).
  static MonomialPolynomial variable(int vars, int k) {
    MonomialPolynomial p(vars);
    Exponents e(static_cast<std::size_t>(vars), 0);
    e.at(static_cast<std::size_t>(k)) = 1;
    p.add_term(std::move(e), Coef(1));
    return p;
  }

  int vars() const { return vars_; }
  const Terms& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  void add_term(Exponents e, const Coef& c) {
    if (static_cast<int>(e.size()) != vars_) throw InvalidArgument("exponent arity mismatch");
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(std::move(e), c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Coef coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Coef(0) : it->second;
  }

  MonomialPolynomial& operator+=(const MonomialPolynomial& o) {
    check_arity(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  MonomialPolynomial& operator-=(const MonomialPolynomial& o) {
    check_arity(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  MonomialPolynomial& operator*=(const Coef& k) {
    if (k == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= k;
    return *this;
  }

  friend MonomialPolynomial operator+(MonomialPolynomial a, const MonomialPolynomial& b) { return a += b; }
  friend MonomialPolynomial operator-(MonomialPolynomial a, const MonomialPolynomial& b) { return a -= b; }
  friend MonomialPolynomial operator*(MonomialPolynomial a, const Coef& k) { return a *= k; }
  friend MonomialPolynomial operator*(const Coef& k, MonomialPolynomial a) { return a *= k; }

  friend MonomialPolynomial operator*(const MonomialPolynomial& a, const MonomialPolynomial& b) {
    a.check_arity(b);
    MonomialPolynomial out(a.vars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(ea);
        for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
        out.add_term(std::move(e), ca * cb);
      }
    return out;
  }

  friend bool operator==(const MonomialPolynomial&, const MonomialPolynomial&) = default;

  MonomialPolynomial pow(int k) const {
    MonomialPolynomial out = constant(vars_, Coef(1));
    for (int i = 0; i < k; ++i) out = out * *this;
    return out;
  }

  template <class T>
  T evaluate(std::span<const T> x) const {
    if (static_cast<int>(x.size()) != vars_) throw InvalidArgument("evaluation point arity mismatch");
    T sum = T(0);
    for (const auto& [e, c] : terms_) {
      T term = convert<T>(c);
      for (std::size_t i = 0; i < e.size(); ++i)
        for (int k = 0; k < e[i]; ++k) term *= x[i];
      sum += term;
    }
    return sum;
  }
  template <class T>
  T evaluate(const std::vector<T>& x) const {
    return evaluate<T>(std::span<const T>(x));
  }

  /// x_j -> s_j x_j for every j.
  MonomialPolynomial scale_variables(const std::vector<Coef>& s) const {
    if (static_cast<int>(s.size()) != vars_) throw InvalidArgument("scale arity mismatch");
    MonomialPolynomial out(vars_);
    for (const auto& [e, c] : terms_) {
      Coef k = c;
      for (std::size_t i = 0; i < e.size(); ++i)
        for (int p = 0; p < e[i]; ++p) k *= s[i];
      out.add_term(e, k);
    }
    return out;
  }

  /// Replaces x_k by q (q must not depend on x_k for the result to be free of it).
  MonomialPolynomial substitute(int k, const MonomialPolynomial& q) const {
    check_arity(q);
    MonomialPolynomial out(vars_);
    std::map<int, MonomialPolynomial> powers;
    for (const auto& [e, c] : terms_) {
      const int deg = e[static_cast<std::size_t>(k)];
      auto it = powers.find(deg);
      if (it == powers.end()) it = powers.emplace(deg, q.pow(deg)).first;
      Exponents rest(e);
      rest[static_cast<std::size_t>(k)] = 0;
      MonomialPolynomial mono(vars_);
      mono.add_term(std::move(rest), c);
      out += mono * it->second;
    }
    return out;
  }

  /// Antiderivative in x_k with zero constant.
  MonomialPolynomial antiderivative(int k) const {
    MonomialPolynomial out(vars_);
    for (const auto& [e, c] : terms_) {
      Exponents f(e);
      const int a = ++f[static_cast<std::size_t>(k)];
      out.add_term(std::move(f), c / Coef(a));
    }
    return out;
  }

  /// Integral over the standard simplex {y >= 0, sum y = 1} with respect to
  /// dy_1 ... dy_{n-1}: each monomial contributes prod a_j! / (sum a_j + n - 1)!.
  Coef integrate_standard_simplex() const {
    Coef total = 0;
    for (const auto& [e, c] : terms_) {
      BigInt num = 1;
      int sum = 0;
      for (int a : e) {
        num *= factorial(a);
        sum += a;
      }
      total += c * Coef(num) / Coef(factorial(sum + vars_ - 1));
    }
    return total;
  }

  std::string to_string() const {
    std::string s;
    for (const auto& [e, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += "(" + coef_string(c) + ")";
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i]) s += "*x" + std::to_string(i + 1) + (e[i] > 1 ? "^" + std::to_string(e[i]) : "");
    }
    return s.empty() ? "0" : s;
  }

 private:
  void check_arity(const MonomialPolynomial& o) const {
    if (o.vars_ != vars_) throw InvalidArgument("polynomial arity mismatch");
  }

  static BigInt factorial(int n) {
    BigInt f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
  }

  template <class T>
  static T convert(const Coef& c) {
    if constexpr (std::is_same_v<T, Coef>) {
      return c;
    } else {
      return c.template convert_to<T>();
    }
  }

  static std::string coef_string(const Coef& c) {
    if constexpr (std::is_same_v<Coef, Rational>) {
      return to_fraction_string(c);
    } else {
      return std::to_string(c);
    }
  }

  int vars_;
  Terms terms_;
};

}  // namespace sud
