#ifndef TREEDECAY_LOG_VALUE_HPP_
#define TREEDECAY_LOG_VALUE_HPP_

#include <cmath>
#include <limits>

namespace treedecay {

/// Real number stored as sign * exp(log_abs). Zero has sign 0 and log_abs = -inf.
struct SignedLog {
  int sign = 0;
  double log_abs = -std::numeric_limits<double>::infinity();

  static SignedLog from(double x) {
    if (x == 0.0) return {};
    return {x > 0 ? 1 : -1, std::log(std::fabs(x))};
  }

  bool is_zero() const { return sign == 0; }
  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

  friend SignedLog operator*(SignedLog a, SignedLog b) {
    if (a.sign == 0 || b.sign == 0) return {};
    return {a.sign * b.sign, a.log_abs + b.log_abs};
  }
  friend SignedLog operator/(SignedLog a, SignedLog b) {
    if (a.sign == 0) return {};
    return {a.sign * b.sign, a.log_abs - b.log_abs};
  }
};

/// log(exp(a) + exp(b)) without overflow.
inline double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace treedecay

#endif  // TREEDECAY_LOG_VALUE_HPP_
