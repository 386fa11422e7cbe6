#include "coalscope/ks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "coalscope/error.hpp"

namespace coalscope {

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-17) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_two_sample_exact_pvalue(std::int64_t n, std::int64_t m, std::int64_t d_scaled) {
  if (n < 1 || m < 1) throw ArgumentError("ks exact p-value: sample sizes must be positive");
  if (d_scaled <= 0) return 1.0;
  // A(i,j) = (#paths to (i,j) inside the band) / C(i+j, i).
  std::vector<double> row(static_cast<std::size_t>(m + 1), 0.0);
  auto inside = [&](std::int64_t i, std::int64_t j) { return std::llabs(i * m - j * n) < d_scaled; };
  row[0] = 1.0;
  for (std::int64_t j = 1; j <= m; ++j) row[static_cast<std::size_t>(j)] = inside(0, j) ? row[j - 1] : 0.0;
  for (std::int64_t i = 1; i <= n; ++i) {
    const auto id = static_cast<double>(i);
    row[0] = inside(i, 0) ? row[0] : 0.0;
    for (std::int64_t j = 1; j <= m; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      if (!inside(i, j)) {
        row[jj] = 0.0;
        continue;
      }
      const auto jd = static_cast<double>(j);
      row[jj] = (row[jj] * id + row[jj - 1] * jd) / (id + jd);
    }
  }
  return std::clamp(1.0 - row[static_cast<std::size_t>(m)], 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b, std::uint64_t exact_limit) {
  if (a.empty() || b.empty()) throw ArgumentError("ks_two_sample: samples must be non-empty");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const auto n = static_cast<std::int64_t>(x.size());
  const auto m = static_cast<std::int64_t>(y.size());

  std::int64_t i = 0, j = 0, d_scaled = 0;
  while (i < n || j < m) {
    double v;
    if (j >= m || (i < n && x[i] <= y[j])) {
      v = x[i];
    } else {
      v = y[j];
    }
    // Consume every tie at v before comparing the empirical CDFs.
    while (i < n && x[i] == v) ++i;
    while (j < m && y[j] == v) ++j;
    d_scaled = std::max<std::int64_t>(d_scaled, std::llabs(i * m - j * n));
  }

  KsResult r;
  r.statistic = static_cast<double>(d_scaled) / (static_cast<double>(n) * static_cast<double>(m));
  if (static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(m) <= exact_limit) {
    r.p_value = ks_two_sample_exact_pvalue(n, m, d_scaled);
    r.exact = true;
  } else {
    const double en = std::sqrt(static_cast<double>(n) * static_cast<double>(m) / static_cast<double>(n + m));
    r.p_value = kolmogorov_survival((en + 0.12 + 0.11 / en) * r.statistic);
  }
  return r;
}

KsResult ks_one_sample(std::span<const double> xs, const std::function<double(double)>& cdf) {
  if (xs.empty()) throw ArgumentError("ks_one_sample: sample must be non-empty");
  std::vector<double> x(xs.begin(), xs.end());
  std::sort(x.begin(), x.end());
  const auto n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double f = cdf(x[k]);
    d = std::max({d, (static_cast<double>(k) + 1.0) / n - f, f - static_cast<double>(k) / n});
  }
  KsResult r;
  r.statistic = d;
  const double en = std::sqrt(n);
  r.p_value = kolmogorov_survival((en + 0.12 + 0.11 / en) * d);
  return r;
}

}  // namespace coalscope
