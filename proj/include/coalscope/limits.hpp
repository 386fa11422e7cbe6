#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "coalscope/measures.hpp"
#include "coalscope/rng.hpp"

namespace coalscope {

/// (1+√5)/2: sign change of the length fluctuation exponent -1+α-1/α.
inline constexpr double kGoldenAlpha = 1.6180339887498949;
/// √2: the stable and Poisson fluctuations of K_t have equal order here.
inline constexpr double kSqrt2 = 1.4142135623730951;

/// v(t) = ∫₀ᵗ (1-r/γ)^{-γ} dr = (γ/(2-α)) (1 - (1-t/γ)^{2-α}), t ∈ [0,γ].
double v_of_t(double alpha, double t);
/// a(t) = v(t) / (C₀Γ(2-α)).
double a_of_t(const CoalescentMeasure& m, double t);
/// κ(t) = ∫₀ᵗ (∫ᵣᵗ (1-s/γ)^{-α} ds)^α dr for t ∈ (0,γ).
double kappa_of_t(double alpha, double t);

// Stable laws.
//
// Chambers-Mallows-Stuck produces S_α(1, β, 0) in the Samorodnitsky-Taqqu
// parametrization. For β = 1 and α ∈ (1,2),
//     E[exp(-u σX)] = exp(-σ^α u^α / cos(πα/2)),
// and cos(πα/2) < 0, so σ^α = -cos(πα/2) gives E[e^{-uZ}] = e^{u^α}.
// Then V_t = (t/γ)^{1/α} Z has E[e^{-uV_t}] = e^{t u^α/γ}. The law has a heavy
// right tail and a left tail lighter than any power.
//
// For α = 1, β = 1: E[exp(-λ Y)] = exp((2σ/π) λ log λ) for
// Y = σX + (2/π)σ log σ, so σ = π/2 yields E[e^{-λZ}] = e^{λ log λ}.

/// Z with E[e^{-uZ}] = e^{u^α}, α ∈ (1,2).
double sample_stable_unit(double alpha, Rng& rng);
/// Z with E[e^{-λZ}] = e^{λ log λ}.
double sample_bs_stable(Rng& rng);
/// Standard Gumbel, density e^{-x-e^{-x}}.
double sample_gumbel(Rng& rng);

struct StablePath {
  std::vector<double> grid;
  std::vector<double> values;
  double alpha = 1.5;
  double gamma_param = 0.5;
};

/// V on an increasing grid in [0, γ]; V at the first grid point is drawn
/// from V₀ = 0 at time 0.
StablePath sample_stable_path(double alpha, std::span<const double> grid, Rng& rng);

enum class LimitScenario {
  TauLimit,
  LhatLimit,
  LLimit,
  MutationLow,
  MutationHigh,
  MutationCritical,
  KingmanGumbel,
  BSStable,
};

std::string to_string(LimitScenario s);

enum class LimitMethod { Oneshot, Path };

struct LimitParams {
  double alpha = 1.5;
  double c0 = 0.0;  // C₀ of the measure; needed for L and mutation limits
  double t = 0.25;
  double theta = 1.0;
  LimitMethod method = LimitMethod::Oneshot;
  int path_steps = 2048;

  static LimitParams for_measure(const CoalescentMeasure& m, double t, double theta = 1.0);
};

struct LimitSample {
  LimitScenario scenario = LimitScenario::TauLimit;
  double value = 0.0;
  double t = 0.0;
};

LimitSample sample_limit(LimitScenario scenario, const LimitParams& params, Rng& rng);

/// statistic = sign · (value - center) / scale.
struct Centering {
  double center = 0.0;
  double scale = 1.0;
  double sign = 1.0;

  double apply(double value) const { return sign * (value - center) / scale; }
};

/// Centering of each finite-n statistic. The raw value is τ/γ for TauLimit
/// (giving n^{-1/α}(n - τ/γ)), L̂_t for LhatLimit, L_t for LLimit, K_t for
/// the mutation scenarios, and L^{(n)} for KingmanGumbel and BSStable.
Centering centering_scaling(LimitScenario scenario, const CoalescentMeasure& m, std::int64_t n, double t = 0.0,
                            double theta = 1.0);

/// Fluctuation exponent -1+α-1/α.
inline double length_exponent(double alpha) { return -1.0 + alpha - 1.0 / alpha; }

}  // namespace coalscope
