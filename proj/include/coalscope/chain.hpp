#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "coalscope/measures.hpp"
#include "coalscope/rng.hpp"

namespace coalscope {

/// One realization of the block-counting jump chain Y₀ = n > Y₁ > ... > 1.
///
/// Stores the increments X_k = Y_{k-1} - Y_k and the unit exponentials E_k
/// behind each holding time (12 bytes per jump); states and holding times
/// E_k / g_{Y_k} are reconstructed through the shared kernel.
struct JumpChainPath {
  std::int64_t n0 = 0;
  std::vector<std::uint32_t> jumps;
  std::vector<double> exp_draws;
  std::shared_ptr<const JumpKernel> kernel;

  /// τ_n, the number of coalescences.
  std::int64_t tau() const { return static_cast<std::int64_t>(jumps.size()); }
  /// Y_0 .. Y_τ.
  std::vector<std::int64_t> states() const;
  /// Holding time in Y_k for k = 0..τ-1.
  std::vector<double> holding() const;
  /// T_n = Σ holding.
  double t_mrca() const;
};

std::shared_ptr<const JumpKernel> make_kernel(const CoalescentMeasure& m, std::int64_t n_max);

JumpChainPath sample_jump_chain(std::shared_ptr<const JumpKernel> kernel, std::int64_t n, Rng& rng);
JumpChainPath sample_jump_chain(const CoalescentMeasure& m, std::int64_t n, Rng& rng);

/// Partial lengths on a time grid (cut at the ⌊nt⌋-th coalescence) plus
/// full-tree totals and mutation counts.
struct TreeStatistics {
  std::vector<double> grid;
  std::vector<double> L_t;
  std::vector<double> L_tilde_t;  // E_k replaced by 1
  std::vector<double> L_hat_t;    // Σ Y_k^{1-α}
  std::vector<std::int64_t> K_t;
  double L_total = 0.0;
  double L_tilde_total = 0.0;
  double L_hat_total = 0.0;
  double T_mrca = 0.0;
  std::int64_t K_total = 0;
};

/// Grid points must lie in (0, γ]; γ = α-1 for the measure of the path.
/// K_t is one Poisson process in L: increments Poisson(θ ΔL) along the grid,
/// so K_t is nondecreasing and K_total >= K_t.
TreeStatistics tree_statistics(const JumpChainPath& path, std::span<const double> grid, double theta,
                               Rng& rng);

/// Last summation index ⌊nt⌋ ∧ (τ-1) for the partial sums.
std::int64_t last_index(std::int64_t n, double t, std::int64_t tau);

enum class WattersonMode { Kingman, PowerTail };

/// Kingman: K / (2 H_{n-1}). PowerTail: K / (a(γ) n^{2-α}).
double watterson_estimate(std::int64_t k_total, std::int64_t n, const CoalescentMeasure& m, WattersonMode mode);

}  // namespace coalscope
