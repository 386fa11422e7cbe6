#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "coalscope/error.hpp"
#include "coalscope/ks.hpp"
#include "coalscope/rng.hpp"
#include "coalscope/stats.hpp"

using namespace coalscope;

namespace {

// Exact null p-value by enumerating every split of {0..n+m-1} into sizes n and m.
double brute_force_pvalue(int n, int m, std::int64_t d_obs) {
  const int total = n + m;
  long hits = 0;
  long count = 0;
  for (unsigned mask = 0; mask < (1u << total); ++mask) {
    if (__builtin_popcount(mask) != n) continue;
    ++count;
    std::int64_t i = 0, j = 0, d = 0;
    for (int bit = 0; bit < total; ++bit) {
      if (mask & (1u << bit)) ++i; else ++j;
      d = std::max<std::int64_t>(d, std::llabs(i * m - j * n));
    }
    if (d >= d_obs) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(count);
}

}  // namespace

TEST_CASE("exact two-sample KS p-value matches enumeration for sizes <= 8") {
  double worst = 0.0;
  for (int n = 1; n <= 8; ++n) {
    for (int m = 1; m <= 8; ++m) {
      for (std::int64_t d = 1; d <= n * m; ++d) {
        worst = std::max(worst, std::abs(ks_two_sample_exact_pvalue(n, m, d) - brute_force_pvalue(n, m, d)));
      }
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("two-sample KS statistic on small fixed samples") {
  const std::vector<double> a{0.1, 0.4, 0.7};
  const std::vector<double> b{0.2, 0.3, 0.5, 0.9};
  const auto r = ks_two_sample(a, b);
  // ECDF gap at 0.3: 1/3 vs 2/4 -> 1/6; at 0.5: 2/3 vs 3/4; max is at 0.3/0.1.
  CHECK(r.statistic == doctest::Approx(1.0 / 3.0));
  CHECK(r.exact);
  const std::vector<double> c{5.0, 6.0};
  const auto far = ks_two_sample(a, c);
  CHECK(far.statistic == 1.0);
  CHECK(far.p_value == doctest::Approx(brute_force_pvalue(3, 2, 6)));
  CHECK_THROWS_AS(ks_two_sample(std::vector<double>{}, c), ArgumentError);
}

TEST_CASE("ties are consumed together") {
  const std::vector<double> a{1.0, 1.0, 2.0};
  const std::vector<double> b{1.0, 2.0, 2.0};
  CHECK(ks_two_sample(a, b).statistic == doctest::Approx(1.0 / 3.0));
  CHECK(ks_two_sample(a, a).statistic == 0.0);
  CHECK(ks_two_sample(a, a).p_value == 1.0);
}

TEST_CASE("asymptotic p-value is close to the exact one for moderate sizes") {
  for (std::int64_t d : {60, 90, 120}) {
    const double exact = ks_two_sample_exact_pvalue(300, 300, d * 300);
    const double lambda = std::sqrt(150.0) * (d / 300.0);
    const double en = std::sqrt(150.0);
    const double approx = kolmogorov_survival((en + 0.12 + 0.11 / en) * lambda / en);
    CHECK(std::abs(exact - approx) < 0.01);
  }
  CHECK(kolmogorov_survival(0.0) == 1.0);
  CHECK(kolmogorov_survival(1.36) == doctest::Approx(0.0494).epsilon(0.01));
}

TEST_CASE("KS p-values are uniform under the null (chi-square sanity)") {
  Rng rng = make_stream(99, "ks-null", 0);
  constexpr int kTrials = 1000;
  constexpr int kBins = 10;
  std::vector<int> bins(kBins, 0);
  for (int trial = 0; trial < kTrials; ++trial) {
    std::vector<double> a(200), b(150);
    for (auto& x : a) x = uniform01(rng);
    for (auto& x : b) x = uniform01(rng);
    const double p = ks_two_sample(a, b).p_value;
    ++bins[std::min(kBins - 1, static_cast<int>(p * kBins))];
  }
  // The discrete statistic puts slightly less mass near p=1; compare with a
  // chi-square bound at 9 degrees of freedom (0.1% point 27.9).
  double chi2 = 0.0;
  for (int c : bins) chi2 += (c - 100.0) * (c - 100.0) / 100.0;
  CHECK(chi2 < 27.9);
}

TEST_CASE("one-sample KS against the true CDF") {
  Rng rng = make_stream(5, "ks-one", 0);
  std::vector<double> xs(5000);
  for (auto& x : xs) x = standard_exponential(rng);
  const auto r = ks_one_sample(xs, [](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); });
  CHECK(r.p_value > 0.01);
  const auto bad = ks_one_sample(xs, [](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-2.0 * x); });
  CHECK(bad.p_value < 1e-6);
}

TEST_CASE("summary statistics") {
  const std::vector<double> xs{3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0};
  const auto s = summarize(xs);
  CHECK(s.count == 8);
  CHECK(s.mean == doctest::Approx(31.0 / 8.0));
  CHECK(s.min == 1.0);
  CHECK(s.max == 9.0);
  // Type-7 quantiles of the sorted sample {1,1,2,3,4,5,6,9}.
  CHECK(s.median == doctest::Approx(3.5));
  CHECK(s.q25 == doctest::Approx(1.75));
  CHECK(s.q75 == doctest::Approx(5.25));
  double ss = 0.0;
  for (double x : xs) ss += (x - 31.0 / 8.0) * (x - 31.0 / 8.0);
  CHECK(variance(xs) == doctest::Approx(ss / 7.0));
  CHECK(standard_error(xs) == doctest::Approx(std::sqrt(ss / 7.0 / 8.0)));
  CHECK(quantile(xs, 0.0) == 1.0);
  CHECK(quantile(xs, 1.0) == 9.0);
}

TEST_CASE("truncated mean drops extreme values") {
  std::vector<double> xs(100000, 1.0);
  xs[0] = 1e12;
  xs[1] = -1e12;
  CHECK(truncated_mean(xs) == doctest::Approx(1.0));
}

TEST_CASE("log-log fit recovers a power law") {
  std::vector<double> x{10, 100, 1000, 10000};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -0.7));
  const auto fit = fit_loglog(x, y);
  CHECK(fit.slope == doctest::Approx(-0.7).epsilon(1e-12));
  CHECK(std::exp(fit.intercept) == doctest::Approx(3.0).epsilon(1e-12));
}
