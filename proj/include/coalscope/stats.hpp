#pragma once

#include <span>
#include <vector>

namespace coalscope {

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double q05 = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double q95 = 0.0;
  double max = 0.0;
};

Summary summarize(std::span<const double> xs);

double mean(std::span<const double> xs);
/// Unbiased sample variance.
double variance(std::span<const double> xs);
double standard_error(std::span<const double> xs);

/// Linear-interpolation quantile of an ascending-sorted sample.
double quantile_sorted(std::span<const double> sorted, double p);
double quantile(std::span<const double> xs, double p);

/// Mean after discarding values outside the [q, 1-q] sample quantiles.
double truncated_mean(std::span<const double> xs, double q = 1e-4);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least squares of log y on log x.
LineFit fit_loglog(std::span<const double> xs, std::span<const double> ys);

}  // namespace coalscope
