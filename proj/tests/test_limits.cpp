#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "coalscope/error.hpp"
#include "coalscope/ks.hpp"
#include "coalscope/limits.hpp"
#include "coalscope/special.hpp"
#include "coalscope/stats.hpp"

using namespace coalscope;

namespace {

template <typename F>
double oracle_integral(F f, double a, double b) {
  static boost::math::quadrature::tanh_sinh<double> ts(15);
  return ts.integrate(f, a, b, 1e-13);
}

struct LaplaceEstimate {
  double value;
  double se;
};

template <typename Draw>
LaplaceEstimate empirical_laplace(double u, int draws, Draw draw) {
  std::vector<double> terms(static_cast<std::size_t>(draws));
  for (auto& x : terms) x = std::exp(-u * draw());
  return {mean(terms), standard_error(terms)};
}

}  // namespace

TEST_CASE("v(t) closed form against quadrature of its integral") {
  for (double alpha : {1.2, 1.5, 1.8}) {
    const double gamma = alpha - 1.0;
    CHECK(v_of_t(alpha, 0.0) == 0.0);
    CHECK(v_of_t(alpha, gamma) == doctest::Approx(gamma / (2.0 - alpha)).epsilon(1e-14));
    for (double frac : {0.1, 0.5, 0.9, 0.999}) {
      const double t = frac * gamma;
      const double quad = oracle_integral([&](double r) { return std::pow(1.0 - r / gamma, -gamma); }, 0.0, t);
      CHECK(std::abs(v_of_t(alpha, t) - quad) < 1e-10);
    }
  }
  CHECK_THROWS_AS(v_of_t(2.0, 0.1), ArgumentError);
  CHECK_THROWS_AS(v_of_t(1.5, 0.6), ArgumentError);
}

TEST_CASE("a(t) and kappa(t)") {
  const auto m = beta_coalescent(1.5);
  CHECK(a_of_t(m, 0.25) == doctest::Approx(v_of_t(1.5, 0.25) / (m.c0 * gamma_fn(0.5))));
  // a(t) for Beta: C₀Γ(2-α) = 1/(αΓ(α)).
  CHECK(a_of_t(m, 0.25) == doctest::Approx(v_of_t(1.5, 0.25) * 1.5 * gamma_fn(1.5)));
  CHECK_THROWS_AS(a_of_t(kingman(), 0.1), UnsupportedFamilyError);

  const double alpha = 1.5, gamma = 0.5, t = 0.25;
  const double outer = std::pow(1.0 - t / gamma, -gamma);
  const double oracle = oracle_integral(
      [&](double r) {
        const double inner =
            oracle_integral([&](double s) { return std::pow(1.0 - s / gamma, -alpha); }, r, t);
        return std::pow(inner, alpha);
      },
      0.0, t);
  CHECK(kappa_of_t(alpha, t) == doctest::Approx(oracle).epsilon(1e-9));
  (void)outer;
  double previous_k = 0.0, previous_v = 0.0;
  for (double s = 0.01; s < 0.5; s += 0.01) {
    const double k = kappa_of_t(alpha, s);
    const double v = v_of_t(alpha, s);
    CHECK(k > previous_k);
    CHECK(v > previous_v);
    previous_k = k;
    previous_v = v;
  }
  CHECK_THROWS_AS(kappa_of_t(alpha, 0.5), ArgumentError);
}

TEST_CASE("stable sampler Laplace transform") {
  for (double alpha : {1.2, 1.5, 1.8}) {
    Rng rng = make_stream(31, "stable-laplace", static_cast<std::uint64_t>(alpha * 10));
    for (double u : {0.25, 0.5, 1.0}) {
      const auto est = empirical_laplace(u, 100000, [&] { return sample_stable_unit(alpha, rng); });
      CHECK(std::abs(est.value - std::exp(std::pow(u, alpha))) < 4.0 * est.se);
    }
  }
}

TEST_CASE("V has a heavy right tail and a thin left tail") {
  Rng rng = make_stream(37, "stable-tails", 0);
  std::vector<double> xs(100000);
  for (auto& x : xs) x = sample_stable_unit(1.5, rng);
  const auto above = std::count_if(xs.begin(), xs.end(), [](double x) { return x > 10.0; });
  const auto below = std::count_if(xs.begin(), xs.end(), [](double x) { return x < -10.0; });
  CHECK(above > 100);
  CHECK(below < 100);
  // E[V] = 0. Cutting the top 1e-4 of a tail with index α removes about
  // 1e-4·q·α/(α-1) of mean; add it back, and the bottom 1e-4 at its quantile.
  std::sort(xs.begin(), xs.end());
  const double q = 1e-4;
  const double hi = quantile_sorted(xs, 1.0 - q);
  const double lo = quantile_sorted(xs, q);
  const double corrected = (1.0 - 2.0 * q) * truncated_mean(xs, q) + q * hi * 1.5 / 0.5 + q * lo;
  CHECK(std::abs(corrected) < 4.0 * standard_error(xs));
}

TEST_CASE("stable path increments") {
  Rng rng = make_stream(41, "stable-path", 0);
  const std::vector<double> grid{0.125, 0.25, 0.5};
  std::vector<double> last;
  for (int i = 0; i < 20000; ++i) last.push_back(sample_stable_path(1.5, grid, rng).values.back());
  Rng rng2 = make_stream(41, "stable-path-direct", 0);
  std::vector<double> direct;
  for (int i = 0; i < 20000; ++i) direct.push_back(sample_stable_unit(1.5, rng2));
  CHECK(ks_two_sample(last, direct).p_value > 0.01);
  const std::vector<double> bad{0.3, 0.1};
  CHECK_THROWS_AS(sample_stable_path(1.5, bad, rng), ArgumentError);
}

TEST_CASE("Bolthausen-Sznitman stable law Laplace transform") {
  Rng rng = make_stream(43, "bs-laplace", 0);
  for (double lambda : {0.25, 0.5, 1.0}) {
    const auto est = empirical_laplace(lambda, 100000, [&] { return sample_bs_stable(rng); });
    CHECK(std::abs(est.value - std::exp(lambda * std::log(lambda))) < 4.0 * est.se);
  }
  CHECK(std::exp(0.5 * std::log(0.5)) == doctest::Approx(0.70710678118654752));
}

TEST_CASE("Gumbel sampler") {
  Rng rng = make_stream(47, "gumbel", 0);
  std::vector<double> xs(10000);
  for (auto& x : xs) x = sample_gumbel(rng);
  CHECK(ks_one_sample(xs, [](double x) { return std::exp(-std::exp(-x)); }).p_value > 0.01);
  CHECK(std::abs(mean(xs) - 0.5772156649015329) < 4.0 * standard_error(xs));
}

TEST_CASE("V*_t samplers agree in law") {
  LimitParams one = LimitParams::for_measure(beta_coalescent(1.5), 0.25);
  LimitParams path = one;
  path.method = LimitMethod::Path;
  std::vector<double> a, b;
  for (std::uint64_t i = 0; i < 4000; ++i) {
    Rng r1 = make_stream(53, "lhat-oneshot", i);
    Rng r2 = make_stream(53, "lhat-path", i);
    a.push_back(sample_limit(LimitScenario::LhatLimit, one, r1).value);
    b.push_back(sample_limit(LimitScenario::LhatLimit, path, r2).value);
  }
  CHECK(ks_two_sample(a, b).p_value > 0.01);
}

TEST_CASE("limit scenario regimes and centerings") {
  const auto m = beta_coalescent(1.5);
  Rng rng = make_stream(59, "regimes", 0);
  auto p = LimitParams::for_measure(m, 0.25);
  CHECK_THROWS_AS(sample_limit(LimitScenario::MutationLow, p, rng), ArgumentError);
  CHECK_NOTHROW(sample_limit(LimitScenario::MutationHigh, p, rng));
  p.theta = 0.0;
  CHECK_THROWS_AS(sample_limit(LimitScenario::MutationHigh, p, rng), ArgumentError);
  p = LimitParams::for_measure(beta_coalescent(kSqrt2), 0.2);
  CHECK_NOTHROW(sample_limit(LimitScenario::MutationCritical, p, rng));
  p.t = 0.5;
  CHECK_THROWS_AS(sample_limit(LimitScenario::LhatLimit, p, rng), ArgumentError);

  CHECK(length_exponent(kSqrt2) == doctest::Approx(-(1.0 - kSqrt2 / 2.0)).epsilon(1e-14));
  CHECK(length_exponent(kGoldenAlpha) == doctest::Approx(0.0).scale(1.0));

  const auto tau = centering_scaling(LimitScenario::TauLimit, m, 10000);
  CHECK(tau.apply(10000.0 - std::pow(10000.0, 1.0 / 1.5)) == doctest::Approx(1.0));
  const auto len = centering_scaling(LimitScenario::LLimit, m, 5000, 0.25);
  CHECK(len.center == doctest::Approx(a_of_t(m, 0.25) * std::pow(5000.0, 0.5)));
  CHECK(len.scale == doctest::Approx(std::pow(5000.0, 1.0 - 1.5 + 1.0 / 1.5)));
  CHECK_THROWS_AS(centering_scaling(LimitScenario::LLimit, beta_coalescent(1.7), 5000, 0.25), ArgumentError);
  const auto bs = centering_scaling(LimitScenario::BSStable, bolthausen_sznitman(), 100000);
  const double ln = std::log(100000.0);
  CHECK(bs.center == doctest::Approx(100000.0 / ln + 100000.0 * std::log(ln) / (ln * ln)));
  CHECK(bs.scale == doctest::Approx(100000.0 / (ln * ln)));
  const auto gum = centering_scaling(LimitScenario::KingmanGumbel, kingman(), 5000);
  CHECK(gum.apply(2.0 * std::log(5000.0) + 2.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(centering_scaling(LimitScenario::KingmanGumbel, m, 5000), ArgumentError);
}
