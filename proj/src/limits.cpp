#include "coalscope/limits.hpp"

#include <cmath>
#include <numbers>

#include "coalscope/error.hpp"
#include "coalscope/quadrature.hpp"
#include "coalscope/special.hpp"

namespace coalscope {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRegimeTol = 1e-6;

void require_alpha(double alpha, const char* what) {
  if (!(alpha > 1.0 && alpha < 2.0)) {
    throw ArgumentError(std::string(what) + ": alpha must lie in (1,2), got " + std::to_string(alpha));
  }
}

void require_open_time(double alpha, double t, const char* what) {
  const double gamma = alpha - 1.0;
  if (!(t > 0.0 && t < gamma)) {
    throw ArgumentError(std::string(what) + ": t must lie in (0, gamma) = (0, " + std::to_string(gamma) +
                        "), got " + std::to_string(t));
  }
}

double lead_constant(const CoalescentMeasure& m) { return m.c0 * gamma_fn(2.0 - m.alpha); }

}  // namespace

double v_of_t(double alpha, double t) {
  require_alpha(alpha, "v_of_t");
  const double gamma = alpha - 1.0;
  if (!(t >= 0.0 && t <= gamma)) throw ArgumentError("v_of_t: t must lie in [0, gamma]");
  return gamma / (2.0 - alpha) * -std::expm1((2.0 - alpha) * std::log1p(-t / gamma));
}

double a_of_t(const CoalescentMeasure& m, double t) {
  if (!m.has_power_tail()) throw UnsupportedFamilyError("a_of_t: requires alpha in (1,2)");
  return v_of_t(m.alpha, t) / lead_constant(m);
}

double kappa_of_t(double alpha, double t) {
  require_alpha(alpha, "kappa_of_t");
  require_open_time(alpha, t, "kappa_of_t");
  const double gamma = alpha - 1.0;
  const double outer = std::pow(1.0 - t / gamma, -gamma);
  // ∫ᵣᵗ (1-s/γ)^{-α} ds = (1-t/γ)^{-γ} - (1-r/γ)^{-γ}
  return integrate([&](double r) { return std::pow(outer - std::pow(1.0 - r / gamma, -gamma), alpha); }, 0.0, t)
      .value;
}

double sample_stable_unit(double alpha, Rng& rng) {
  const double v = kPi * (uniform01(rng) - 0.5);
  const double w = standard_exponential(rng);
  const double tan_term = std::tan(kPi * alpha / 2.0);
  const double shift = std::atan(tan_term) / alpha;
  const double stretch = std::pow(1.0 + tan_term * tan_term, 1.0 / (2.0 * alpha));
  const double x = stretch * std::sin(alpha * (v + shift)) / std::pow(std::cos(v), 1.0 / alpha) *
                   std::pow(std::cos(v - alpha * (v + shift)) / w, (1.0 - alpha) / alpha);
  const double sigma = std::pow(-std::cos(kPi * alpha / 2.0), 1.0 / alpha);
  return sigma * x;
}

double sample_bs_stable(Rng& rng) {
  const double v = kPi * (uniform01(rng) - 0.5);
  const double w = standard_exponential(rng);
  const double half_pi = kPi / 2.0;
  const double x =
      (2.0 / kPi) * ((half_pi + v) * std::tan(v) - std::log(half_pi * w * std::cos(v) / (half_pi + v)));
  const double sigma = half_pi;
  return sigma * x + (2.0 / kPi) * sigma * std::log(sigma);
}

double sample_gumbel(Rng& rng) { return -std::log(standard_exponential(rng)); }

StablePath sample_stable_path(double alpha, std::span<const double> grid, Rng& rng) {
  require_alpha(alpha, "sample_stable_path");
  StablePath path;
  path.alpha = alpha;
  path.gamma_param = alpha - 1.0;
  path.grid.assign(grid.begin(), grid.end());
  path.values.reserve(grid.size());
  double previous_t = 0.0;
  double value = 0.0;
  for (double t : grid) {
    if (t < previous_t || t > path.gamma_param + 1e-12) {
      throw ArgumentError("sample_stable_path: grid must be increasing within [0, gamma]");
    }
    const double dt = t - previous_t;
    if (dt > 0.0) value += std::pow(dt / path.gamma_param, 1.0 / alpha) * sample_stable_unit(alpha, rng);
    path.values.push_back(value);
    previous_t = t;
  }
  return path;
}

std::string to_string(LimitScenario s) {
  switch (s) {
    case LimitScenario::TauLimit: return "tau";
    case LimitScenario::LhatLimit: return "lhat";
    case LimitScenario::LLimit: return "length";
    case LimitScenario::MutationLow: return "mutations-low";
    case LimitScenario::MutationHigh: return "mutations-high";
    case LimitScenario::MutationCritical: return "mutations-critical";
    case LimitScenario::KingmanGumbel: return "kingman-gumbel";
    case LimitScenario::BSStable: return "bs-stable";
  }
  return "unknown";
}

LimitParams LimitParams::for_measure(const CoalescentMeasure& m, double t, double theta) {
  LimitParams p;
  p.alpha = m.alpha;
  p.c0 = m.c0;
  p.t = t;
  p.theta = theta;
  return p;
}

namespace {

/// (α-1) ∫₀ᵗ (1-r/γ)^{-α} V_r dr.
double lhat_limit(const LimitParams& p, Rng& rng) {
  const double alpha = p.alpha;
  const double gamma = alpha - 1.0;
  if (p.method == LimitMethod::Oneshot) {
    // Equal in law to γ κ(t)^{1/α} V₁ with V₁ = γ^{-1/α} Z.
    const double kappa = kappa_of_t(alpha, p.t);
    return gamma * std::pow(kappa, 1.0 / alpha) * std::pow(1.0 / gamma, 1.0 / alpha) *
           sample_stable_unit(alpha, rng);
  }
  if (p.path_steps < 1) throw ArgumentError("sample_limit: path_steps must be >= 1");
  // Midpoint rule; V is simulated at the midpoints only.
  const double h = p.t / static_cast<double>(p.path_steps);
  double v = 0.0;
  double sum = 0.0;
  for (int i = 0; i < p.path_steps; ++i) {
    const double dt = (i == 0) ? h / 2.0 : h;
    v += std::pow(dt / gamma, 1.0 / alpha) * sample_stable_unit(alpha, rng);
    const double r = (static_cast<double>(i) + 0.5) * h;
    sum += std::pow(1.0 - r / gamma, -alpha) * v;
  }
  return gamma * h * sum;
}

void require_mutation_regime(LimitScenario s, double alpha) {
  switch (s) {
    case LimitScenario::MutationLow:
      if (!(alpha < kSqrt2 - kRegimeTol)) throw ArgumentError("mutations-low requires alpha < sqrt(2)");
      break;
    case LimitScenario::MutationHigh:
      if (!(alpha > kSqrt2 + kRegimeTol)) throw ArgumentError("mutations-high requires alpha > sqrt(2)");
      break;
    case LimitScenario::MutationCritical:
      if (std::abs(alpha - kSqrt2) > kRegimeTol) throw ArgumentError("mutations-critical requires alpha = sqrt(2)");
      break;
    default:
      break;
  }
}

}  // namespace

LimitSample sample_limit(LimitScenario scenario, const LimitParams& p, Rng& rng) {
  LimitSample out;
  out.scenario = scenario;
  out.t = p.t;
  switch (scenario) {
    case LimitScenario::KingmanGumbel:
      out.value = sample_gumbel(rng);
      return out;
    case LimitScenario::BSStable:
      out.value = sample_bs_stable(rng);
      return out;
    case LimitScenario::TauLimit:
      require_alpha(p.alpha, "sample_limit");
      out.t = p.alpha - 1.0;
      out.value = sample_stable_unit(p.alpha, rng);  // V_γ
      return out;
    default:
      break;
  }
  require_alpha(p.alpha, "sample_limit");
  require_open_time(p.alpha, p.t, "sample_limit");
  if (scenario == LimitScenario::LhatLimit) {
    out.value = lhat_limit(p, rng);
    return out;
  }
  if (!(p.c0 > 0.0)) throw ArgumentError("sample_limit: c0 must be positive for length limits");
  const double lead = p.c0 * gamma_fn(2.0 - p.alpha);
  if (scenario == LimitScenario::LLimit) {
    out.value = lhat_limit(p, rng) / lead;
    return out;
  }
  if (!(p.theta > 0.0)) throw ArgumentError("sample_limit: theta must be positive for mutation limits");
  require_mutation_regime(scenario, p.alpha);
  const double a = v_of_t(p.alpha, p.t) / lead;
  switch (scenario) {
    case LimitScenario::MutationLow:
      out.value = p.theta * lhat_limit(p, rng) / lead;
      break;
    case LimitScenario::MutationHigh:
      out.value = std::sqrt(p.theta * a) * standard_normal(rng);
      break;
    case LimitScenario::MutationCritical: {
      const double stable = p.theta * lhat_limit(p, rng) / lead;
      out.value = stable + std::sqrt(p.theta * a) * standard_normal(rng);
      break;
    }
    default:
      throw ArgumentError("sample_limit: unhandled scenario");
  }
  return out;
}

Centering centering_scaling(LimitScenario scenario, const CoalescentMeasure& m, std::int64_t n, double t,
                            double theta) {
  if (n < 2) throw ArgumentError("centering_scaling: n must be >= 2");
  const auto nd = static_cast<double>(n);
  Centering c;
  switch (scenario) {
    case LimitScenario::KingmanGumbel:
      if (m.family != Family::Kingman) throw ArgumentError("kingman-gumbel centering needs the Kingman coalescent");
      c.center = 2.0 * std::log(nd);
      c.scale = 2.0;
      return c;
    case LimitScenario::BSStable: {
      if (m.family != Family::BolthausenSznitman) {
        throw ArgumentError("bs-stable centering needs the Bolthausen-Sznitman coalescent");
      }
      const double ln = std::log(nd);
      c.center = nd / ln + nd * std::log(ln) / (ln * ln);
      c.scale = nd / (ln * ln);
      return c;
    }
    case LimitScenario::TauLimit:
      require_alpha(m.alpha, "centering_scaling");
      c.center = nd;
      c.scale = std::pow(nd, 1.0 / m.alpha);
      c.sign = -1.0;
      return c;
    default:
      break;
  }
  require_alpha(m.alpha, "centering_scaling");
  require_open_time(m.alpha, t, "centering_scaling");
  const double alpha = m.alpha;
  const double bulk = std::pow(nd, 2.0 - alpha);
  const double stable_scale = std::pow(nd, -length_exponent(alpha));
  switch (scenario) {
    case LimitScenario::LhatLimit:
      c.center = bulk * v_of_t(alpha, t);
      c.scale = stable_scale;
      return c;
    case LimitScenario::LLimit:
      if (alpha >= kGoldenAlpha) {
        throw ArgumentError("length centering: the stable fluctuation limit needs alpha < (1+sqrt5)/2");
      }
      c.center = bulk * a_of_t(m, t);
      c.scale = stable_scale;
      return c;
    case LimitScenario::MutationLow:
    case LimitScenario::MutationCritical:
      require_mutation_regime(scenario, alpha);
      if (!(theta > 0.0)) throw ArgumentError("mutation centering: theta must be positive");
      c.center = theta * bulk * a_of_t(m, t);
      c.scale = stable_scale;
      return c;
    case LimitScenario::MutationHigh:
      require_mutation_regime(scenario, alpha);
      if (!(theta > 0.0)) throw ArgumentError("mutation centering: theta must be positive");
      c.center = theta * bulk * a_of_t(m, t);
      c.scale = std::pow(nd, 1.0 - alpha / 2.0);
      return c;
    default:
      break;
  }
  throw ArgumentError("centering_scaling: unhandled scenario");
}

}  // namespace coalscope
