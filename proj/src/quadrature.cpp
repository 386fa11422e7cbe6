#include "coalscope/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "coalscope/error.hpp"

namespace coalscope {

namespace {

boost::math::quadrature::tanh_sinh<double>& integrator() {
  thread_local boost::math::quadrature::tanh_sinh<double> instance(15);
  return instance;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts) {
  if (!(a < b)) {
    if (a == b) return {};
    throw ArgumentError("integrate: lower limit exceeds upper limit");
  }
  std::vector<double> points{a};
  for (double k : opts.knots) {
    if (k > a && k < b) points.push_back(k);
  }
  points.push_back(b);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  QuadratureResult total;
  double l1 = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    double err = 0.0;
    double piece_l1 = 0.0;
    std::size_t levels = 0;
    const double lo = points[i];
    const double hi = points[i + 1];
    const double edge = 1e-100 * (hi - lo);
    // Integrable endpoint singularities overflow at abscissas a few ulps from
    // the ends; their weight is far below double resolution.
    auto guarded = [&](double x) {
      const double y = f(x);
      if (!std::isfinite(y) && (x - lo <= edge || hi - x <= edge)) return 0.0;
      return y;
    };
    double piece = integrator().integrate(guarded, lo, hi, opts.rel_tol * 0.1, &err, &piece_l1, &levels);
    if (!std::isfinite(piece)) {
      throw NumericError("integrate: non-finite value on [" + std::to_string(points[i]) + ", " +
                             std::to_string(points[i + 1]) + "]",
                         err);
    }
    total.value += piece;
    // err is reported on the rescaled unit interval.
    total.error += err * (points[i + 1] - points[i]);
    l1 += piece_l1;
  }
  const double allowed = std::max(opts.abs_tol, opts.rel_tol * std::max(std::abs(total.value), 0.0));
  if (total.error > allowed && total.error > opts.rel_tol * l1) {
    throw NumericError("integrate: tolerance not reached", total.error);
  }
  return total;
}

QuadratureOptions knots_for_block_count(double n) {
  QuadratureOptions opts;
  if (n > 1.0) opts.knots.push_back(1.0 / n);
  return opts;
}

}  // namespace coalscope
