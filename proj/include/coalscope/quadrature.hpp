#pragma once

#include <functional>
#include <vector>

namespace coalscope {

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-9;
  /// Interior split points; the integrand is integrated separately on each
  /// piece so endpoint singularities and boundary layers sit at piece ends.
  std::vector<double> knots;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive double-exponential quadrature of f over [a, b], split at the
/// knots in opts. Throws NumericError when the error estimate exceeds
/// max(abs_tol, rel_tol * |integral|).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

/// Knot at 1/n, the width of the boundary layer of (1-t)^n near 0.
QuadratureOptions knots_for_block_count(double n);

}  // namespace coalscope
