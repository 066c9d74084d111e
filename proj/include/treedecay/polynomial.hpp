#ifndef TREEDECAY_POLYNOMIAL_HPP_
#define TREEDECAY_POLYNOMIAL_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "treedecay/log_value.hpp"

namespace treedecay {

using BigInt = boost::multiprecision::cpp_int;

/// Dense univariate polynomial sum_k c_k x^k, stored without trailing zeros.
template <typename Coeff>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Coeff> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial constant(Coeff v) { return Polynomial(std::vector<Coeff>{std::move(v)}); }
  static Polynomial monomial(Coeff v, std::size_t degree) {
    std::vector<Coeff> c(degree + 1, Coeff(0));
    c[degree] = std::move(v);
    return Polynomial(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  /// Smallest exponent with a nonzero coefficient; 0 for the zero polynomial.
  std::size_t lowest_degree() const {
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (c_[k] != 0) return k;
    }
    return 0;
  }

  Coeff operator[](std::size_t k) const { return k < c_.size() ? c_[k] : Coeff(0); }
  std::span<const Coeff> coefficients() const { return c_; }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Coeff(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Coeff(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  Polynomial& operator*=(const Coeff& s) {
    for (auto& x : c_) x *= s;
    trim();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Coeff& s) { return a *= s; }
  friend Polynomial operator*(const Coeff& s, Polynomial a) { return a *= s; }
  friend Polynomial operator-(Polynomial a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Coeff> out(a.c_.size() + b.c_.size() - 1, Coeff(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    }
    return Polynomial(std::move(out));
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  bool operator==(const Polynomial&) const = default;

  Polynomial pow(unsigned e) const {
    Polynomial result = constant(Coeff(1));
    Polynomial base = *this;
    while (e) {
      if (e & 1u) result *= base;
      e >>= 1u;
      if (e) base *= base;
    }
    return result;
  }

  /// Horner evaluation in the scalar type T.
  template <typename T>
  T evaluate(const T& x) const {
    T acc = T(0);
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + static_cast<T>(c_[k]);
    return acc;
  }

  /// sign and log|p(x)| for x = exp(log_x) > 0. The lowest-order monomial is
  /// factored out so that tiny x never underflows.
  SignedLog log_abs_at(double log_x) const {
    if (is_zero()) return {};
    const std::size_t m = lowest_degree();
    const long double x = std::exp(static_cast<long double>(log_x));
    long double acc = 0.0L;
    for (std::size_t k = c_.size(); k-- > m;) acc = acc * x + static_cast<long double>(c_[k]);
    if (acc == 0.0L) return {};
    SignedLog out;
    out.sign = acc > 0 ? 1 : -1;
    out.log_abs = static_cast<double>(std::log(std::fabs(acc))) + static_cast<double>(m) * log_x;
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<Coeff> c_;
};

template <typename Coeff>
std::ostream& operator<<(std::ostream& os, const Polynomial<Coeff>& p) {
  if (p.is_zero()) return os << '0';
  bool first = true;
  for (std::size_t k = 0; k <= static_cast<std::size_t>(p.degree()); ++k) {
    const Coeff c = p[k];
    if (c == 0) continue;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << '-';
    const Coeff mag = c < 0 ? Coeff(-c) : c;
    if (k == 0 || mag != 1) os << mag;
    if (k > 0) os << "u" << (k > 1 ? "^" + std::to_string(k) : "");
    first = false;
  }
  return os;
}

/// Exact statistical weight sum_sigma w(sigma) u^(H(sigma)/2) with u = exp(-2 beta).
using GibbsPolynomial = Polynomial<BigInt>;

}  // namespace treedecay

#endif  // TREEDECAY_POLYNOMIAL_HPP_
