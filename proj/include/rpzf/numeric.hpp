#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "rpzf/errors.hpp"

namespace rpzf {

// Binomial coefficient in floating point via the multiplicative form.
// Exact to ~1e-15 relative and overflow-safe well past n = 1000
// (C(1000,500) ~ 2.7e299 still fits a double).
inline double binomial_coefficient(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  double c = 1.0;
  for (std::int64_t i = 1; i <= k; ++i) c *= static_cast<double>(n - k + i) / static_cast<double>(i);
  return c;
}

// pow with the 0^0 = 1 convention used throughout the transition formulas.
inline double pow0(double x, std::int64_t e) {
  if (e == 0) return 1.0;
  return std::pow(x, static_cast<double>(e));
}

// Binomial pmf  C(n,k) pi^k (1-pi)^(n-k); pi may be 0 or 1.
inline double binomial_pmf(std::int64_t n, std::int64_t k, double pi) {
  if (k < 0 || k > n) return 0.0;
  return binomial_coefficient(n, k) * pow0(pi, k) * pow0(1.0 - pi, n - k);
}

// log(1 - exp(x)) for x <= 0, stable near both ends.
inline double log1mexp(double x) {
  if (x >= 0.0) throw NumericalError("log1mexp: argument must be negative");
  if (x > -0.6931471805599453) return std::log(-std::expm1(x));
  return std::log1p(-std::exp(x));
}

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

}  // namespace rpzf
