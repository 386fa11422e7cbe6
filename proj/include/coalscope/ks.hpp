#pragma once

#include <cstdint>
#include <functional>
#include <span>

namespace coalscope {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  bool exact = false;
};

/// Two-sample Kolmogorov-Smirnov test, two-sided.
///
/// The p-value is exact (lattice-path count under the null of no ties) when
/// n·m <= exact_limit, otherwise from the Kolmogorov limit law with the
/// Stephens small-sample correction.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b,
                       std::uint64_t exact_limit = 40'000'000);

/// P(D_{n,m} >= d_scaled / (n·m)) where d_scaled = max |i·m - j·n|.
double ks_two_sample_exact_pvalue(std::int64_t n, std::int64_t m, std::int64_t d_scaled);

/// Q(λ) = 2 Σ_{k>=1} (-1)^{k-1} e^{-2k²λ²}.
double kolmogorov_survival(double lambda);

/// One-sample test against a continuous CDF.
KsResult ks_one_sample(std::span<const double> xs, const std::function<double(double)>& cdf);

}  // namespace coalscope
