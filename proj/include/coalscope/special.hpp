#pragma once

#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

namespace coalscope {

// Thin wrappers so every Gamma evaluation goes through log-space and the
// thread-safe Boost implementation (glibc lgamma writes signgam).

inline double log_gamma(double x) { return boost::math::lgamma(x); }

inline double gamma_fn(double x) { return boost::math::tgamma(x); }

inline double log_beta(double a, double b) {
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

inline double log_binomial(double n, double k) {
  return log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0);
}

inline double harmonic_number(long n) {
  double h = 0.0;
  for (long k = n; k >= 1; --k) h += 1.0 / static_cast<double>(k);
  return h;
}

}  // namespace coalscope
