#include <doctest.h>

#include <cmath>
#include <vector>

#include "coalscope/chain.hpp"
#include "coalscope/error.hpp"
#include "coalscope/special.hpp"
#include "coalscope/stats.hpp"

using namespace coalscope;

TEST_CASE("Kingman chain is the degenerate chain") {
  Rng rng = make_stream(1, "kingman", 0);
  const auto path = sample_jump_chain(kingman(), 5, rng);
  CHECK(path.tau() == 4);
  CHECK(path.states() == std::vector<std::int64_t>{5, 4, 3, 2, 1});
  const auto h = path.holding();
  REQUIRE(h.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    const double y = 5.0 - static_cast<double>(k);
    CHECK(h[k] == doctest::Approx(path.exp_draws[k] / (y * (y - 1.0) / 2.0)));
  }
}

TEST_CASE("path invariants") {
  for (const auto& m : {beta_coalescent(1.3), bolthausen_sznitman(), power_law_density(1.6)}) {
    auto kernel = make_kernel(m, 3000);
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
      Rng rng = make_stream(3, "invariants", rep);
      const auto path = sample_jump_chain(kernel, 3000, rng);
      const auto y = path.states();
      std::int64_t total = 0;
      for (auto x : path.jumps) {
        CHECK(x >= 1);
        total += x;
      }
      CHECK(total == 2999);
      CHECK(y.back() == 1);
      for (std::size_t k = 1; k < y.size(); ++k) CHECK(y[k] < y[k - 1]);
      for (double h : path.holding()) CHECK(h > 0.0);
      CHECK(path.tau() >= 1);
      CHECK(path.tau() <= 2999);
    }
  }
}

TEST_CASE("sampling is deterministic per stream") {
  const auto m = beta_coalescent(1.5);
  Rng a = make_stream(42, "det", 7);
  Rng b = make_stream(42, "det", 7);
  Rng c = make_stream(42, "det", 8);
  const auto pa = sample_jump_chain(m, 1000, a);
  const auto pb = sample_jump_chain(m, 1000, b);
  const auto pc = sample_jump_chain(m, 1000, c);
  CHECK(pa.jumps == pb.jumps);
  CHECK(pa.exp_draws == pb.exp_draws);
  CHECK(pa.exp_draws != pc.exp_draws);
}

TEST_CASE("kernel range and argument checks") {
  auto kernel = make_kernel(beta_coalescent(1.5), 100);
  Rng rng = make_stream(1, "args", 0);
  CHECK_THROWS_AS(sample_jump_chain(kernel, 101, rng), ArgumentError);
  CHECK_THROWS_AS(sample_jump_chain(kernel, 1, rng), ArgumentError);
  const auto path = sample_jump_chain(kernel, 100, rng);
  const std::vector<double> outside{0.6};
  CHECK_THROWS_AS(tree_statistics(path, outside, 1.0, rng), ArgumentError);
  const std::vector<double> unsorted{0.3, 0.2};
  CHECK_THROWS_AS(tree_statistics(path, unsorted, 1.0, rng), ArgumentError);
  const std::vector<double> ok{0.25};
  CHECK_THROWS_AS(tree_statistics(path, ok, -1.0, rng), ArgumentError);
}

TEST_CASE("partial lengths follow the floor(nt) cut") {
  const double alpha = 1.5;
  auto kernel = make_kernel(beta_coalescent(alpha), 400);
  Rng rng = make_stream(11, "cut", 0);
  const auto path = sample_jump_chain(kernel, 400, rng);
  const std::vector<double> grid{0.1, 0.25, 0.5};
  Rng mut = make_stream(11, "cut-mut", 0);
  const auto stats = tree_statistics(path, grid, 2.0, mut);

  const auto y = path.states();
  const auto h = path.holding();
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const std::int64_t last = g + 1 == grid.size() ? path.tau() - 1 : last_index(400, grid[g], path.tau());
    double length = 0.0, tilde = 0.0, hat = 0.0;
    for (std::int64_t k = 0; k <= last; ++k) {
      const double yk = static_cast<double>(y[k]);
      length += yk * h[k];
      tilde += yk / kernel->rate(y[k]);
      hat += std::pow(yk, 1.0 - alpha);
    }
    CHECK(stats.L_t[g] == doctest::Approx(length).epsilon(1e-12));
    CHECK(stats.L_tilde_t[g] == doctest::Approx(tilde).epsilon(1e-12));
    CHECK(stats.L_hat_t[g] == doctest::Approx(hat).epsilon(1e-12));
  }
  // t = γ runs to τ-1, i.e. the whole tree.
  CHECK(stats.L_t.back() == doctest::Approx(stats.L_total).epsilon(1e-12));
  CHECK(stats.T_mrca == doctest::Approx(path.t_mrca()).epsilon(1e-12));
  for (std::size_t g = 1; g < grid.size(); ++g) CHECK(stats.K_t[g] >= stats.K_t[g - 1]);
  CHECK(stats.K_total >= stats.K_t.back());
}

TEST_CASE("coupling bound between L and L-tilde holds pathwise") {
  const auto m = beta_coalescent(1.25);
  auto kernel = make_kernel(m, 2000);
  const std::vector<double> grid{0.05, 0.125, 0.2};
  for (std::uint64_t rep = 0; rep < 50; ++rep) {
    Rng rng = make_stream(8, "coupling", rep);
    const auto path = sample_jump_chain(kernel, 2000, rng);
    const auto stats = tree_statistics(path, grid, 0.0, rng);
    const auto y = path.states();
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const std::int64_t last = last_index(2000, grid[g], path.tau());
      double bound = 0.0;
      for (std::int64_t k = 0; k <= last; ++k) {
        bound += static_cast<double>(y[k]) / kernel->rate(y[k]) * std::abs(path.exp_draws[k] - 1.0);
      }
      CHECK(std::abs(stats.L_t[g] - stats.L_tilde_t[g]) <= bound * (1.0 + 1e-12));
      CHECK(stats.K_t[g] == 0);
    }
  }
}

TEST_CASE("Kingman moments by Monte Carlo") {
  const int n = 200;
  auto kernel = make_kernel(kingman(), n);
  std::vector<double> length, height, theta_hat;
  const std::vector<double> grid{1.0};
  for (std::uint64_t rep = 0; rep < 4000; ++rep) {
    Rng rng = make_stream(17, "kingman-moments", rep);
    const auto path = sample_jump_chain(kernel, n, rng);
    const auto s = tree_statistics(path, grid, 1.5, rng);
    length.push_back(s.L_total);
    height.push_back(s.T_mrca);
    theta_hat.push_back(watterson_estimate(s.K_total, n, kingman(), WattersonMode::Kingman));
  }
  // E[L] = 2 H_{n-1}, E[T] = 2(1 - 1/n), E[K] = θ E[L].
  CHECK(std::abs(mean(length) - 2.0 * harmonic_number(n - 1)) < 4.0 * standard_error(length));
  CHECK(std::abs(mean(height) - 2.0 * (1.0 - 1.0 / n)) < 4.0 * standard_error(height));
  CHECK(std::abs(mean(theta_hat) - 1.5) < 4.0 * standard_error(theta_hat));
}

TEST_CASE("number of coalescences concentrates at gamma n") {
  const auto m = beta_coalescent(1.5);
  auto kernel = make_kernel(m, 20000);
  std::vector<double> ratio;
  for (std::uint64_t rep = 0; rep < 200; ++rep) {
    Rng rng = make_stream(23, "tau", rep);
    ratio.push_back(static_cast<double>(sample_jump_chain(kernel, 20000, rng).tau()) / 20000.0);
  }
  CHECK(std::abs(mean(ratio) - 0.5) < 0.02);
}

TEST_CASE("Watterson estimator modes") {
  CHECK(watterson_estimate(0, 10, kingman(), WattersonMode::Kingman) == 0.0);
  CHECK(watterson_estimate(10, 2, kingman(), WattersonMode::Kingman) == doctest::Approx(5.0));
  CHECK_THROWS_AS(watterson_estimate(10, 10, kingman(), WattersonMode::PowerTail), UnsupportedFamilyError);
  CHECK_THROWS_AS(watterson_estimate(10, 10, beta_coalescent(1.5), WattersonMode::Kingman), UnsupportedFamilyError);
  CHECK_THROWS_AS(watterson_estimate(-1, 10, kingman(), WattersonMode::Kingman), ArgumentError);
}
