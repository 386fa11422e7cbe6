#include "coalscope/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "coalscope/error.hpp"
#include "coalscope/limits.hpp"
#include "coalscope/special.hpp"

namespace coalscope {

std::vector<std::int64_t> JumpChainPath::states() const {
  std::vector<std::int64_t> y;
  y.reserve(jumps.size() + 1);
  std::int64_t cur = n0;
  y.push_back(cur);
  for (auto x : jumps) {
    cur -= static_cast<std::int64_t>(x);
    y.push_back(cur);
  }
  return y;
}

std::vector<double> JumpChainPath::holding() const {
  std::vector<double> h;
  h.reserve(jumps.size());
  std::int64_t cur = n0;
  for (std::size_t k = 0; k < jumps.size(); ++k) {
    h.push_back(exp_draws[k] / kernel->rate(cur));
    cur -= static_cast<std::int64_t>(jumps[k]);
  }
  return h;
}

double JumpChainPath::t_mrca() const {
  const auto h = holding();
  return std::accumulate(h.begin(), h.end(), 0.0);
}

std::shared_ptr<const JumpKernel> make_kernel(const CoalescentMeasure& m, std::int64_t n_max) {
  return std::make_shared<const JumpKernel>(m, n_max);
}

JumpChainPath sample_jump_chain(std::shared_ptr<const JumpKernel> kernel, std::int64_t n, Rng& rng) {
  if (n < 2) throw ArgumentError("sample_jump_chain: n must be >= 2");
  if (!kernel || kernel->max_blocks() < n) {
    throw ArgumentError("sample_jump_chain: kernel does not cover n=" + std::to_string(n));
  }
  JumpChainPath path;
  path.n0 = n;
  path.kernel = std::move(kernel);
  std::int64_t y = n;
  while (y > 1) {
    path.exp_draws.push_back(standard_exponential(rng));
    const std::int64_t x = path.kernel->sample_jump(y, uniform01(rng));
    if (x < 1 || x > y - 1) throw InvariantError("sample_jump_chain: jump outside [1, y-1]");
    path.jumps.push_back(static_cast<std::uint32_t>(x));
    y -= x;
  }
  return path;
}

JumpChainPath sample_jump_chain(const CoalescentMeasure& m, std::int64_t n, Rng& rng) {
  return sample_jump_chain(make_kernel(m, n), n, rng);
}

std::int64_t last_index(std::int64_t n, double t, std::int64_t tau) {
  const auto cut = static_cast<std::int64_t>(std::floor(static_cast<double>(n) * t));
  return std::min(cut, tau - 1);
}

TreeStatistics tree_statistics(const JumpChainPath& path, std::span<const double> grid, double theta,
                               Rng& rng) {
  if (!(theta >= 0.0)) throw ArgumentError("tree_statistics: theta must be >= 0");
  const auto& m = path.kernel->measure();
  const double gamma = m.gamma();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !(grid[i] <= gamma + 1e-12)) {
      throw ArgumentError("tree_statistics: grid point " + std::to_string(grid[i]) + " outside (0, gamma]");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw ArgumentError("tree_statistics: grid must be strictly increasing");
    }
  }

  const std::int64_t tau = path.tau();
  std::vector<std::int64_t> cut(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    cut[i] = std::abs(grid[i] - gamma) <= 1e-12 ? tau - 1 : last_index(path.n0, grid[i], tau);
  }

  TreeStatistics out;
  out.grid.assign(grid.begin(), grid.end());
  out.L_t.resize(grid.size());
  out.L_tilde_t.resize(grid.size());
  out.L_hat_t.resize(grid.size());
  out.K_t.resize(grid.size());

  const double hat_exponent = 1.0 - m.alpha;
  double length = 0.0;
  double tilde = 0.0;
  double hat = 0.0;
  double time = 0.0;
  std::size_t next_grid = 0;
  std::int64_t y = path.n0;
  for (std::int64_t k = 0; k < tau; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    const double g = path.kernel->rate(y);
    const double yd = static_cast<double>(y);
    const double hold = path.exp_draws[idx] / g;
    time += hold;
    length += yd * hold;
    tilde += yd / g;
    hat += std::pow(yd, hat_exponent);
    while (next_grid < grid.size() && cut[next_grid] == k) {
      out.L_t[next_grid] = length;
      out.L_tilde_t[next_grid] = tilde;
      out.L_hat_t[next_grid] = hat;
      ++next_grid;
    }
    y -= static_cast<std::int64_t>(path.jumps[idx]);
  }
  // Cut-offs before index 0 cannot occur (⌊nt⌋ >= 0), so every slot is set.
  out.L_total = length;
  out.L_tilde_total = tilde;
  out.L_hat_total = hat;
  out.T_mrca = time;

  std::int64_t mutations = 0;
  double previous = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    mutations += poisson(rng, theta * (out.L_t[i] - previous));
    out.K_t[i] = mutations;
    previous = out.L_t[i];
  }
  out.K_total = mutations + poisson(rng, theta * (out.L_total - previous));
  return out;
}

double watterson_estimate(std::int64_t k_total, std::int64_t n, const CoalescentMeasure& m, WattersonMode mode) {
  if (n < 2) throw ArgumentError("watterson_estimate: n must be >= 2");
  if (k_total < 0) throw ArgumentError("watterson_estimate: mutation count must be >= 0");
  const auto k = static_cast<double>(k_total);
  switch (mode) {
    case WattersonMode::Kingman:
      if (m.family != Family::Kingman) {
        throw UnsupportedFamilyError("watterson_estimate: Kingman mode needs the Kingman coalescent");
      }
      return k / (2.0 * harmonic_number(n - 1));
    case WattersonMode::PowerTail:
      if (!m.has_power_tail()) {
        throw UnsupportedFamilyError("watterson_estimate: power-tail mode needs alpha in (1,2)");
      }
      return k / (a_of_t(m, m.gamma()) * std::pow(static_cast<double>(n), 2.0 - m.alpha));
  }
  throw ArgumentError("watterson_estimate: unknown mode");
}

}  // namespace coalscope
