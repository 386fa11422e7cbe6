#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "coalscope/quadrature.hpp"

namespace coalscope {

enum class Family {
  Kingman,             // Λ = δ₀
  BolthausenSznitman,  // Λ = Lebesgue on [0,1]
  Beta,                // Λ = Beta(2-α, α)
  BetaShape,           // Λ = Beta(a, b) for arbitrary shapes
  GeneralPowerTail,    // user density with ρ(t) = C₀t^{-α} + O(t^{-α+ζ})
};

std::string to_string(Family family);

using DensityFn = std::function<double(double)>;

class TailCache;

/// A finite measure Λ on [0,1] together with the tail data of
/// ν(dx) = x⁻²Λ(dx): ρ(t) = ν((t,1]) ≈ C₀t^{-α}.
///
/// Beta-type families (Beta, BetaShape, BolthausenSznitman) carry the shape
/// pair (a, b) of the Beta law, which gives every rate in closed form.
/// GeneralPowerTail carries a density evaluated by quadrature; its ρ is
/// tabulated once on a log-spaced grid at construction.
struct CoalescentMeasure {
  Family family = Family::Kingman;
  double alpha = 2.0;
  double c0 = 0.0;
  double zeta = 0.0;
  double shape_a = 0.0;
  double shape_b = 0.0;
  DensityFn density;
  std::shared_ptr<const TailCache> tail_cache;

  double gamma() const { return alpha - 1.0; }
  bool is_beta_type() const {
    return family == Family::Beta || family == Family::BetaShape ||
           family == Family::BolthausenSznitman;
  }
  /// α ∈ (1,2): the regime of the asymptotic theorems.
  bool has_power_tail() const;
  std::string describe() const;
};

CoalescentMeasure kingman();
CoalescentMeasure bolthausen_sznitman();
CoalescentMeasure beta_coalescent(double alpha);
/// Λ = Beta(a, b) probability law. Beta(1,1) is reported as
/// BolthausenSznitman and Beta(2-α, α) as Beta.
CoalescentMeasure beta_shape(double a, double b);
CoalescentMeasure general_power_tail(double alpha, double c0, double zeta, DensityFn density);
/// GeneralPowerTail instance Λ(dx) = (2-α)x^{1-α}dx, used as a non-Beta
/// reference with ρ(t) = ((2-α)/α)(t^{-α} - 1).
CoalescentMeasure power_law_density(double alpha);

/// ρ(t) = ν((t,1]).
double tail_rho(const CoalescentMeasure& m, double t);

/// λ_{b,k} = ∫ x^{k-2}(1-x)^{b-k} Λ(dx), 2 <= k <= b.
double lambda_rate(const CoalescentMeasure& m, std::int64_t b, std::int64_t k);

/// g_n as Σ_{ℓ=1}^{n-1} C(n,ℓ+1) λ_{n,ℓ+1}.
double total_rate(const CoalescentMeasure& m, std::int64_t n);

struct TotalRateForms {
  double binomial_sum = 0.0;   // Σ C(n,ℓ+1) λ_{n,ℓ+1}
  double tail_integral = 0.0;  // n(n-1) ∫ (1-t)^{n-2} t ρ(t) dt
  double relative_gap = 0.0;
};

/// Both expressions of g_n. Throws NumericError when they disagree by more
/// than `rel_tol`.
TotalRateForms total_rate_forms(const CoalescentMeasure& m, std::int64_t n, double rel_tol = 1e-8);

/// Law of the first jump X₁^{(n)} (the number of lineages lost at the first
/// merger). pmf[ℓ-1] = P(X₁^{(n)} = ℓ), ℓ = 1..n-1.
struct JumpLawTable {
  std::int64_t n = 0;
  std::vector<double> pmf;
  double g_n = 0.0;

  double at(std::int64_t ell) const { return pmf.at(static_cast<std::size_t>(ell - 1)); }
  double tail(std::int64_t k) const;
  double mean() const;
  double second_moment() const;
};

JumpLawTable transition_table(const CoalescentMeasure& m, std::int64_t n);

/// P(X₁^{(n)} >= k) from the ratio of ρ-integrals.
double first_jump_tail(const CoalescentMeasure& m, std::int64_t n, std::int64_t k);

/// Limit law X of the first jump as n → ∞.
double limit_jump_pmf(double alpha, std::int64_t k);
double limit_jump_tail(double alpha, std::int64_t k);
/// E[e^{-uX}] in closed form.
double limit_laplace(double alpha, double u);

struct LaplaceExpansion {
  double value = 0.0;     // φₙ(u)
  double residual = 0.0;  // φₙ(u) - (1 - u/γ + u^α/γ)
};

double finite_laplace(const CoalescentMeasure& m, std::int64_t n, double u);
LaplaceExpansion finite_laplace_expansion(const CoalescentMeasure& m, std::int64_t n, double u);

double mean_first_jump(const CoalescentMeasure& m, std::int64_t n);
/// n ∫ [1-(1-t)^{n-1}] ρ(t) dt / g_n, the integral form of E[X₁^{(n)}].
double mean_first_jump_integral(const CoalescentMeasure& m, std::int64_t n);
double second_moment_first_jump(const CoalescentMeasure& m, std::int64_t n);
/// 2n(n-1) ∫ t ρ(t) dt / g_n - E[X₁^{(n)}].
double second_moment_first_jump_integral(const CoalescentMeasure& m, std::int64_t n);

/// Convergence rate φₙ of the first-jump mean, piecewise in ζ vs α-1.
struct RateFunction {
  double alpha = 1.5;
  double zeta = 1.0;
  double epsilon0 = 0.01;

  double operator()(double n) const;
};

struct GnRatioRow {
  std::int64_t n = 0;
  double g_n = 0.0;
  double ratio = 0.0;     // g_n / (C₀Γ(2-α)n^α)
  double residual = 0.0;  // n^{min(ζ,1)} |ratio - 1|
};

std::vector<GnRatioRow> gn_asymptote_check(const CoalescentMeasure& m,
                                           const std::vector<std::int64_t>& n_list);

/// Φ(i) = ∫ (1-(1-x)^i) x⁻² Λ(dx); requires ∫ x⁻¹ Λ(dx) < ∞.
double mohle_phi(const CoalescentMeasure& m, std::int64_t i);
/// k! / Π_{i<=k} Φ(i).
double mohle_moment(const CoalescentMeasure& m, std::int64_t k);
bool has_finite_inverse_moment(const CoalescentMeasure& m);

/// Per-state rates and jump sampler for the block-counting chain, built once
/// for all states 2..n_max and shared across replicates.
///
/// Beta-type families precompute g_k and P(X=1 | k) so that a jump is drawn
/// by sequential inversion with the term ratio
///   p(ℓ+1)/p(ℓ) = ((k-ℓ-1)/(ℓ+2)) · ((ℓ-1+a)/(k-ℓ-2+b)),
/// an expected O(E[X]) scan. GeneralPowerTail fills cumulative rows lazily
/// from quadrature; the cache is guarded and deterministic.
class JumpKernel {
 public:
  JumpKernel(CoalescentMeasure measure, std::int64_t n_max);
  ~JumpKernel();
  JumpKernel(const JumpKernel&) = delete;
  JumpKernel& operator=(const JumpKernel&) = delete;

  const CoalescentMeasure& measure() const { return measure_; }
  std::int64_t max_blocks() const { return n_max_; }

  /// g_k.
  double rate(std::int64_t k) const;
  /// Draws X given the current state k >= 2 from a uniform u ∈ (0,1).
  std::int64_t sample_jump(std::int64_t k, double u) const;

 private:
  struct LazyRows;

  CoalescentMeasure measure_;
  std::int64_t n_max_;
  std::vector<double> rates_;
  std::vector<double> first_atom_;
  std::unique_ptr<LazyRows> lazy_;
};

}  // namespace coalscope
