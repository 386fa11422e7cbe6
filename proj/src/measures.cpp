#include "coalscope/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>

#include <boost/math/special_functions/beta.hpp>

#include "coalscope/error.hpp"
#include "coalscope/special.hpp"

namespace coalscope {

//------------------------------------------------------------------------
// Tail cache for user densities
//------------------------------------------------------------------------

/// Cubic Hermite table of log ρ against a log coordinate s, with exact
/// slopes passed through a Fritsch-Carlson limiter so the interpolant stays
/// monotone.
struct HermiteTable {
  double s0 = 0.0;
  double step = 0.0;
  std::vector<double> value;
  std::vector<double> slope;

  void limit_slopes() {
    for (std::size_t j = 0; j + 1 < value.size(); ++j) {
      const double secant = (value[j + 1] - value[j]) / step;
      const double a = slope[j] / secant;
      const double b = slope[j + 1] / secant;
      const double r = a * a + b * b;
      if (r > 9.0) {
        const double tau = 3.0 / std::sqrt(r);
        slope[j] = tau * a * secant;
        slope[j + 1] = tau * b * secant;
      }
    }
  }

  double operator()(double s) const {
    auto j = static_cast<std::size_t>(std::max(0.0, (s - s0) / step));
    j = std::min(j, value.size() - 2);
    const double h = step;
    const double x = (s - (s0 + h * static_cast<double>(j))) / h;
    const double x2 = x * x;
    const double x3 = x2 * x;
    return (2 * x3 - 3 * x2 + 1) * value[j] + (x3 - 2 * x2 + x) * h * slope[j] + (-2 * x3 + 3 * x2) * value[j + 1] +
           (x3 - x2) * h * slope[j + 1];
  }
};

/// ρ for a user density. Below t = 1/2 the coordinate is log t, above it
/// log(1-t), so both the t^{-α} singularity and the vanishing at 1 are
/// resolved on a 500 points/decade grid.
class TailCache {
 public:
  TailCache(DensityFn density, double alpha) : density_(std::move(density)), alpha_(alpha) {
    auto integrand = [this](double x) { return density_(x) / (x * x); };
    const std::size_t nodes = static_cast<std::size_t>(std::ceil((std::log(kSplit) - std::log(kEdge)) / kStep)) + 1;
    const double step = (std::log(kSplit) - std::log(kEdge)) / static_cast<double>(nodes - 1);

    // Upper part, s = log(1-t) increasing from log kEdge to log(1/2).
    upper_.s0 = std::log(kEdge);
    upper_.step = step;
    upper_.value.resize(nodes);
    upper_.slope.resize(nodes);
    // Integrate in u = 1-x so intervals next to 1 keep their resolution.
    auto reflected = [this](double u) { return density_(1.0 - u) / ((1.0 - u) * (1.0 - u)); };
    double rho = integrate(reflected, 0.0, kEdge).value;
    for (std::size_t j = 0; j < nodes; ++j) {
      if (j > 0) {
        rho += integrate(reflected, std::exp(upper_.s0 + step * static_cast<double>(j - 1)),
                         std::exp(upper_.s0 + step * static_cast<double>(j)))
                   .value;
      }
      const double one_minus_t = std::exp(upper_.s0 + step * static_cast<double>(j));
      const double t = 1.0 - one_minus_t;
      upper_.value[j] = std::log(rho);
      upper_.slope[j] = density_(t) * one_minus_t / (t * t * rho);
    }
    upper_.limit_slopes();

    // Lower part, s = log t increasing from log kEdge to log(1/2).
    lower_.s0 = std::log(kEdge);
    lower_.step = step;
    lower_.value.resize(nodes);
    lower_.slope.resize(nodes);
    lower_.value[nodes - 1] = upper_.value.back();
    for (std::size_t j = nodes - 1; j-- > 0;) {
      const double lo = std::exp(lower_.s0 + step * static_cast<double>(j));
      const double hi = std::exp(lower_.s0 + step * static_cast<double>(j + 1));
      rho += integrate(integrand, lo, hi).value;
      lower_.value[j] = std::log(rho);
    }
    for (std::size_t j = 0; j < nodes; ++j) {
      const double t = std::exp(lower_.s0 + step * static_cast<double>(j));
      lower_.slope[j] = -density_(t) / (t * std::exp(lower_.value[j]));
    }
    lower_.limit_slopes();
  }

  double operator()(double t) const {
    if (t >= 1.0) return 0.0;
    if (t < kEdge) return std::exp(lower_.value.front()) * std::pow(kEdge / t, alpha_);
    if (t <= kSplit) return std::exp(lower_(std::log(t)));
    const double one_minus_t = 1.0 - t;
    if (one_minus_t < kEdge) return std::exp(upper_.value.front()) * one_minus_t / kEdge;
    return std::exp(upper_(std::log(one_minus_t)));
  }

 private:
  static constexpr double kEdge = 1e-14;
  static constexpr double kSplit = 0.5;
  static constexpr double kStep = 2.302585092994046 / 500.0;

  DensityFn density_;
  double alpha_;
  HermiteTable lower_;
  HermiteTable upper_;
};

//------------------------------------------------------------------------
// Construction
//------------------------------------------------------------------------

std::string to_string(Family family) {
  switch (family) {
    case Family::Kingman: return "kingman";
    case Family::BolthausenSznitman: return "bolthausen-sznitman";
    case Family::Beta: return "beta";
    case Family::BetaShape: return "beta-shape";
    case Family::GeneralPowerTail: return "general-power-tail";
  }
  return "unknown";
}

bool CoalescentMeasure::has_power_tail() const {
  return family != Family::Kingman && alpha > 1.0 && alpha < 2.0;
}

std::string CoalescentMeasure::describe() const {
  std::ostringstream out;
  out << to_string(family);
  if (is_beta_type()) out << "(a=" << shape_a << ", b=" << shape_b << ")";
  out << " alpha=" << alpha;
  return out.str();
}

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) {
    throw ArgumentError("alpha must lie in (1,2), got " + std::to_string(alpha));
  }
}

void require_block_count(std::int64_t n, const char* what) {
  if (n < 2) throw ArgumentError(std::string(what) + ": block count must be >= 2");
}

constexpr double kShapeEps = 1e-14;

}  // namespace

CoalescentMeasure kingman() {
  CoalescentMeasure m;
  m.family = Family::Kingman;
  m.alpha = 2.0;
  m.c0 = 0.0;
  m.zeta = 0.0;
  return m;
}

CoalescentMeasure bolthausen_sznitman() {
  CoalescentMeasure m;
  m.family = Family::BolthausenSznitman;
  m.alpha = 1.0;
  m.c0 = 1.0;
  m.zeta = 1.0;
  m.shape_a = 1.0;
  m.shape_b = 1.0;
  return m;
}

CoalescentMeasure beta_coalescent(double alpha) {
  require_alpha(alpha);
  CoalescentMeasure m;
  m.family = Family::Beta;
  m.alpha = alpha;
  m.c0 = 1.0 / (alpha * gamma_fn(2.0 - alpha) * gamma_fn(alpha));
  // ρ(t) = C₀ t^{-α}(1-t)^α, so the remainder is O(t^{1-α}).
  m.zeta = 1.0;
  m.shape_a = 2.0 - alpha;
  m.shape_b = alpha;
  return m;
}

CoalescentMeasure beta_shape(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw ArgumentError("beta_shape: shapes must be positive");
  if (a == 1.0 && b == 1.0) return bolthausen_sznitman();
  if (std::abs(a + b - 2.0) < kShapeEps && b > 1.0 && b < 2.0) return beta_coalescent(b);
  CoalescentMeasure m;
  m.family = Family::BetaShape;
  m.alpha = 2.0 - a;
  m.shape_a = a;
  m.shape_b = b;
  m.c0 = (a < 2.0) ? 1.0 / ((2.0 - a) * std::exp(log_beta(a, b))) : 0.0;
  m.zeta = 1.0;
  return m;
}

CoalescentMeasure general_power_tail(double alpha, double c0, double zeta, DensityFn density) {
  require_alpha(alpha);
  if (!(c0 > 0.0)) throw ArgumentError("general_power_tail: c0 must be positive");
  if (!(zeta > 0.0)) throw ArgumentError("general_power_tail: zeta must be positive");
  if (!density) throw ArgumentError("general_power_tail: density is required");
  CoalescentMeasure m;
  m.family = Family::GeneralPowerTail;
  m.alpha = alpha;
  m.c0 = c0;
  m.zeta = zeta;
  m.density = density;
  m.tail_cache = std::make_shared<TailCache>(density, alpha);
  return m;
}

CoalescentMeasure power_law_density(double alpha) {
  require_alpha(alpha);
  const double scale = 2.0 - alpha;
  return general_power_tail(alpha, scale / alpha, alpha,
                            [alpha, scale](double x) { return scale * std::pow(x, 1.0 - alpha); });
}

//------------------------------------------------------------------------
// Tail and rates
//------------------------------------------------------------------------

double tail_rho(const CoalescentMeasure& m, double t) {
  if (!(t > 0.0)) throw ArgumentError("tail_rho: t must be positive");
  if (t >= 1.0) return 0.0;
  switch (m.family) {
    case Family::Kingman:
      throw UnsupportedFamilyError("tail_rho: Kingman has no tail measure");
    case Family::GeneralPowerTail:
      return (*m.tail_cache)(t);
    default:
      break;
  }
  const double a = m.shape_a;
  const double b = m.shape_b;
  const double norm = std::exp(-log_beta(a, b));
  if (std::abs(a + b - 2.0) < kShapeEps) {
    // d/dx[x^{-b}(1-x)^b] = -b x^{-1-b}(1-x)^{b-1}
    return norm * std::pow(t, -b) * std::pow(1.0 - t, b) / b;
  }
  if (b == 1.0) {
    if (a == 2.0) return -norm * std::log(t);
    return norm * (1.0 - std::pow(t, a - 2.0)) / (a - 2.0);
  }
  return integrate([a, b, norm](double x) { return norm * std::pow(x, a - 3.0) * std::pow(1.0 - x, b - 1.0); },
                   t, 1.0)
      .value;
}

namespace {

/// log λ_{b,k} for Beta-type measures.
double log_lambda_beta(const CoalescentMeasure& m, double b, double k) {
  return log_beta(k - 2.0 + m.shape_a, b - k + m.shape_b) - log_beta(m.shape_a, m.shape_b);
}

double lambda_quadrature(const CoalescentMeasure& m, std::int64_t b, std::int64_t k) {
  const double p = static_cast<double>(k - 2);
  const double q = static_cast<double>(b - k);
  // Scale by the peak of x^p(1-x)^q so deep tails do not underflow.
  const double mode = (p + q > 0.0) ? p / (p + q) : 0.0;
  const double log_peak = (p > 0.0 ? p * std::log(mode) : 0.0) + (q > 0.0 ? q * std::log1p(-mode) : 0.0);
  QuadratureOptions opts = knots_for_block_count(static_cast<double>(b));
  if (mode > 0.0 && mode < 1.0) opts.knots.push_back(mode);
  const auto& f = m.density;
  const double scaled = integrate(
                            [&](double x) {
                              const double lx = (p > 0.0 ? p * std::log(x) : 0.0) +
                                                (q > 0.0 ? q * std::log1p(-x) : 0.0);
                              return std::exp(lx - log_peak) * f(x);
                            },
                            0.0, 1.0, opts)
                            .value;
  return scaled * std::exp(log_peak);
}

/// Ratio p(ℓ+1)/p(ℓ) of consecutive first-jump atoms at state n.
inline double atom_ratio(double n, double ell, double a, double b) {
  return ((n - ell - 1.0) / (ell + 2.0)) * ((ell - 1.0 + a) / (n - ell - 2.0 + b));
}

/// Unnormalized atoms C(n,ℓ+1)λ_{n,ℓ+1}, ℓ = 1..n-1, by the ratio recurrence.
std::vector<double> beta_atoms(const CoalescentMeasure& m, std::int64_t n) {
  const auto nd = static_cast<double>(n);
  std::vector<double> atoms(static_cast<std::size_t>(n - 1));
  double term = std::exp(log_binomial(nd, 2.0) + log_lambda_beta(m, nd, 2.0));
  for (std::int64_t ell = 1; ell <= n - 1; ++ell) {
    atoms[static_cast<std::size_t>(ell - 1)] = term;
    term *= atom_ratio(nd, static_cast<double>(ell), m.shape_a, m.shape_b);
  }
  return atoms;
}

double binomial_sum_quadrature(const CoalescentMeasure& m, std::int64_t n) {
  const auto nd = static_cast<double>(n);
  const auto& f = m.density;
  // Σ_{k>=2} C(n,k) x^k (1-x)^{n-k} = P(B_{n,x} >= 2) = I_x(2, n-1).
  return integrate(
             [&](double x) { return boost::math::ibeta(2.0, nd - 1.0, x) / (x * x) * f(x); }, 0.0, 1.0,
             knots_for_block_count(nd))
      .value;
}

}  // namespace

double lambda_rate(const CoalescentMeasure& m, std::int64_t b, std::int64_t k) {
  if (b < 2 || k < 2 || k > b) {
    throw ArgumentError("lambda_rate: need 2 <= k <= b, got b=" + std::to_string(b) +
                        ", k=" + std::to_string(k));
  }
  if (m.family == Family::Kingman) return k == 2 ? 1.0 : 0.0;
  if (m.is_beta_type()) {
    return std::exp(log_lambda_beta(m, static_cast<double>(b), static_cast<double>(k)));
  }
  return lambda_quadrature(m, b, k);
}

double total_rate(const CoalescentMeasure& m, std::int64_t n) {
  require_block_count(n, "total_rate");
  const auto nd = static_cast<double>(n);
  if (m.family == Family::Kingman) return nd * (nd - 1.0) / 2.0;
  if (m.is_beta_type()) {
    const auto atoms = beta_atoms(m, n);
    double sum = 0.0;
    for (double a : atoms) sum += a;
    return sum;
  }
  return binomial_sum_quadrature(m, n);
}

TotalRateForms total_rate_forms(const CoalescentMeasure& m, std::int64_t n, double rel_tol) {
  require_block_count(n, "total_rate_forms");
  TotalRateForms forms;
  forms.binomial_sum = total_rate(m, n);
  if (m.family == Family::Kingman) {
    forms.tail_integral = forms.binomial_sum;
    return forms;
  }
  const auto nd = static_cast<double>(n);
  const double integral = integrate(
                              [&](double t) {
                                return std::exp((nd - 2.0) * std::log1p(-t)) * t * tail_rho(m, t);
                              },
                              0.0, 1.0, knots_for_block_count(nd))
                              .value;
  forms.tail_integral = nd * (nd - 1.0) * integral;
  forms.relative_gap = std::abs(forms.tail_integral - forms.binomial_sum) / forms.binomial_sum;
  if (forms.relative_gap > rel_tol) {
    throw NumericError("total_rate_forms: binomial-sum and tail-integral forms disagree at n=" +
                           std::to_string(n),
                       forms.relative_gap);
  }
  return forms;
}

//------------------------------------------------------------------------
// First-jump law
//------------------------------------------------------------------------

double JumpLawTable::tail(std::int64_t k) const {
  if (k < 1 || k > n - 1) throw ArgumentError("JumpLawTable::tail: k out of range");
  double s = 0.0;
  for (auto ell = n - 1; ell >= k; --ell) s += at(ell);
  return s;
}

double JumpLawTable::mean() const {
  double s = 0.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) s += static_cast<double>(i + 1) * pmf[i];
  return s;
}

double JumpLawTable::second_moment() const {
  double s = 0.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    const auto ell = static_cast<double>(i + 1);
    s += ell * ell * pmf[i];
  }
  return s;
}

JumpLawTable transition_table(const CoalescentMeasure& m, std::int64_t n) {
  require_block_count(n, "transition_table");
  JumpLawTable table;
  table.n = n;
  table.pmf.assign(static_cast<std::size_t>(n - 1), 0.0);
  if (m.family == Family::Kingman) {
    table.pmf[0] = 1.0;
    table.g_n = total_rate(m, n);
    return table;
  }
  std::vector<double> atoms;
  if (m.is_beta_type()) {
    atoms = beta_atoms(m, n);
  } else {
    atoms.resize(table.pmf.size());
    const auto nd = static_cast<double>(n);
    for (std::int64_t ell = 1; ell <= n - 1; ++ell) {
      atoms[static_cast<std::size_t>(ell - 1)] =
          std::exp(log_binomial(nd, static_cast<double>(ell + 1))) * lambda_quadrature(m, n, ell + 1);
    }
  }
  double sum = 0.0;
  for (double a : atoms) sum += a;
  for (std::size_t i = 0; i < atoms.size(); ++i) table.pmf[i] = atoms[i] / sum;
  table.g_n = m.is_beta_type() ? sum : total_rate(m, n);
  return table;
}

double first_jump_tail(const CoalescentMeasure& m, std::int64_t n, std::int64_t k) {
  require_block_count(n, "first_jump_tail");
  if (k < 1 || k > n - 1) throw ArgumentError("first_jump_tail: need 1 <= k <= n-1");
  if (k == 1) return 1.0;
  if (m.family == Family::Kingman) return 0.0;
  const auto nd = static_cast<double>(n);
  const auto kd = static_cast<double>(k);
  const double log_prefactor = log_gamma(nd - 1.0) - log_gamma(kd + 1.0) - log_gamma(nd - kd);
  if (m.is_beta_type() && std::abs(m.shape_a + m.shape_b - 2.0) < kShapeEps) {
    // ρ ∝ t^{-b}(1-t)^b turns both integrals into Beta functions.
    const double b = m.shape_b;
    return std::exp(log_prefactor + log_beta(kd + 1.0 - b, nd - kd + b) - log_beta(2.0 - b, nd - 1.0 + b));
  }
  QuadratureOptions opts = knots_for_block_count(nd);
  opts.knots.push_back(kd / nd);
  // Both integrands peak near k/n; factor the peak out before integrating.
  const double mode = kd / (nd - 1.0);
  const double q = nd - kd - 1.0;
  const double log_peak = kd * std::log(mode) + (q > 0.0 ? q * std::log1p(-mode) : 0.0);
  const double num = integrate(
                         [&](double t) {
                           return std::exp(kd * std::log(t) + (q > 0.0 ? q * std::log1p(-t) : 0.0) - log_peak) *
                                  tail_rho(m, t);
                         },
                         0.0, 1.0, opts)
                         .value;
  const double den = integrate(
                         [&](double t) { return std::exp((nd - 2.0) * std::log1p(-t)) * t * tail_rho(m, t); },
                         0.0, 1.0, knots_for_block_count(nd))
                         .value;
  return std::exp(log_prefactor + log_peak) * num / den;
}

double limit_jump_tail(double alpha, std::int64_t k) {
  require_alpha(alpha);
  if (k < 1) throw ArgumentError("limit_jump_tail: k must be >= 1");
  const auto kd = static_cast<double>(k);
  return std::exp(log_gamma(kd + 1.0 - alpha) - log_gamma(2.0 - alpha) - log_gamma(kd + 1.0));
}

double limit_jump_pmf(double alpha, std::int64_t k) {
  require_alpha(alpha);
  if (k < 1) throw ArgumentError("limit_jump_pmf: k must be >= 1");
  const auto kd = static_cast<double>(k);
  return alpha * std::exp(log_gamma(kd + 1.0 - alpha) - log_gamma(2.0 - alpha) - log_gamma(kd + 2.0));
}

double limit_laplace(double alpha, double u) {
  require_alpha(alpha);
  if (!(u >= 0.0)) throw ArgumentError("limit_laplace: u must be >= 0");
  if (u == 0.0) return 1.0;
  if (u > 700.0) return 0.0;
  const double gamma = alpha - 1.0;
  return 1.0 + std::expm1(u) / gamma * std::expm1(gamma * std::log1p(-std::exp(-u)));
}

double finite_laplace(const CoalescentMeasure& m, std::int64_t n, double u) {
  return finite_laplace_expansion(m, n, u).value;
}

LaplaceExpansion finite_laplace_expansion(const CoalescentMeasure& m, std::int64_t n, double u) {
  if (!(u >= 0.0)) throw ArgumentError("finite_laplace: u must be >= 0");
  const auto table = transition_table(m, n);
  LaplaceExpansion out;
  for (std::size_t i = 0; i < table.pmf.size(); ++i) {
    out.value += std::exp(-u * static_cast<double>(i + 1)) * table.pmf[i];
  }
  if (m.has_power_tail()) {
    const double gamma = m.gamma();
    out.residual = out.value - (1.0 - u / gamma + std::pow(u, m.alpha) / gamma);
  } else {
    out.residual = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

double mean_first_jump(const CoalescentMeasure& m, std::int64_t n) {
  if (m.family == Family::Kingman) {
    require_block_count(n, "mean_first_jump");
    return 1.0;
  }
  return transition_table(m, n).mean();
}

double mean_first_jump_integral(const CoalescentMeasure& m, std::int64_t n) {
  require_block_count(n, "mean_first_jump_integral");
  if (m.family == Family::Kingman) return 1.0;
  const auto nd = static_cast<double>(n);
  const double integral = integrate(
                              [&](double t) {
                                return -std::expm1((nd - 1.0) * std::log1p(-t)) * tail_rho(m, t);
                              },
                              0.0, 1.0, knots_for_block_count(nd))
                              .value;
  return nd * integral / total_rate(m, n);
}

double second_moment_first_jump(const CoalescentMeasure& m, std::int64_t n) {
  if (m.family == Family::Kingman) {
    require_block_count(n, "second_moment_first_jump");
    return 1.0;
  }
  return transition_table(m, n).second_moment();
}

double second_moment_first_jump_integral(const CoalescentMeasure& m, std::int64_t n) {
  require_block_count(n, "second_moment_first_jump_integral");
  if (m.family == Family::Kingman) return 1.0;
  const auto nd = static_cast<double>(n);
  const double integral = integrate([&](double t) { return t * tail_rho(m, t); }, 0.0, 1.0).value;
  return 2.0 * nd * (nd - 1.0) * integral / total_rate(m, n) - mean_first_jump_integral(m, n);
}

double RateFunction::operator()(double n) const {
  const double gamma = alpha - 1.0;
  if (zeta < gamma) return std::pow(n, -zeta);
  if (zeta == gamma) return std::pow(n, 1.0 - alpha + epsilon0);
  return std::pow(n, 1.0 - alpha);
}

std::vector<GnRatioRow> gn_asymptote_check(const CoalescentMeasure& m,
                                           const std::vector<std::int64_t>& n_list) {
  if (!m.has_power_tail()) {
    throw UnsupportedFamilyError("gn_asymptote_check: requires alpha in (1,2); got " + m.describe());
  }
  const double lead = m.c0 * gamma_fn(2.0 - m.alpha);
  std::vector<GnRatioRow> rows;
  rows.reserve(n_list.size());
  for (auto n : n_list) {
    GnRatioRow row;
    row.n = n;
    row.g_n = total_rate(m, n);
    row.ratio = row.g_n / (lead * std::pow(static_cast<double>(n), m.alpha));
    row.residual = std::pow(static_cast<double>(n), std::min(m.zeta, 1.0)) * std::abs(row.ratio - 1.0);
    rows.push_back(row);
  }
  return rows;
}

bool has_finite_inverse_moment(const CoalescentMeasure& m) {
  // ∫ x⁻¹ Λ(dx) = B(a-1, b)/B(a, b) for Beta(a, b) laws; the power-tail
  // families have ∫ ρ = ∞.
  return m.family == Family::BetaShape && m.shape_a > 1.0;
}

double mohle_phi(const CoalescentMeasure& m, std::int64_t i) {
  if (!has_finite_inverse_moment(m)) {
    throw UnsupportedFamilyError("mohle_phi: requires a finite integral of x^-1 Lambda(dx); got " +
                                 m.describe());
  }
  if (i < 1) throw ArgumentError("mohle_phi: i must be >= 1");
  // 1-(1-x)^i = x Σ_{j<i} (1-x)^j
  const double a = m.shape_a;
  const double b = m.shape_b;
  const double norm = log_beta(a, b);
  double phi = 0.0;
  for (std::int64_t j = 1; j <= i; ++j) {
    phi += std::exp(log_beta(a - 1.0, b + static_cast<double>(j - 1)) - norm);
  }
  return phi;
}

double mohle_moment(const CoalescentMeasure& m, std::int64_t k) {
  if (!has_finite_inverse_moment(m)) {
    throw UnsupportedFamilyError("mohle_moment: requires a finite integral of x^-1 Lambda(dx); got " +
                                 m.describe());
  }
  if (k < 0) throw ArgumentError("mohle_moment: k must be >= 0");
  double log_moment = log_gamma(static_cast<double>(k) + 1.0);
  for (std::int64_t i = 1; i <= k; ++i) log_moment -= std::log(mohle_phi(m, i));
  return std::exp(log_moment);
}

//------------------------------------------------------------------------
// JumpKernel
//------------------------------------------------------------------------

struct JumpKernel::LazyRows {
  struct Row {
    double g = 0.0;
    std::vector<double> cdf;
  };
  mutable std::shared_mutex mutex;
  mutable std::unordered_map<std::int64_t, Row> rows;
};

JumpKernel::JumpKernel(CoalescentMeasure measure, std::int64_t n_max)
    : measure_(std::move(measure)), n_max_(n_max) {
  require_block_count(n_max, "JumpKernel");
  const auto size = static_cast<std::size_t>(n_max + 1);
  switch (measure_.family) {
    case Family::Kingman:
      rates_.assign(size, 0.0);
      for (std::int64_t k = 2; k <= n_max; ++k) {
        const auto kd = static_cast<double>(k);
        rates_[static_cast<std::size_t>(k)] = kd * (kd - 1.0) / 2.0;
      }
      break;
    case Family::GeneralPowerTail:
      lazy_ = std::make_unique<LazyRows>();
      break;
    default: {
      rates_.assign(size, 0.0);
      first_atom_.assign(size, 0.0);
      const double a = measure_.shape_a;
      const double b = measure_.shape_b;
      for (std::int64_t k = 2; k <= n_max; ++k) {
        const auto kd = static_cast<double>(k);
        double g;
        if (measure_.family == Family::BolthausenSznitman) {
          g = kd - 1.0;
        } else if (measure_.family == Family::Beta) {
          // Σ C(k,j) B(j-α, k-j+α)/B(2-α, α) summed in closed form.
          const double alpha = measure_.alpha;
          g = std::exp(log_gamma(kd + alpha - 1.0) - log_gamma(kd - 1.0) - log_gamma(alpha)) / alpha;
        } else {
          g = total_rate(measure_, k);
        }
        rates_[static_cast<std::size_t>(k)] = g;
        first_atom_[static_cast<std::size_t>(k)] =
            std::exp(log_binomial(kd, 2.0) + log_beta(a, kd - 2.0 + b) - log_beta(a, b)) / g;
      }
      (void)a;
      break;
    }
  }
}

JumpKernel::~JumpKernel() = default;

double JumpKernel::rate(std::int64_t k) const {
  if (k < 2 || k > n_max_) throw ArgumentError("JumpKernel::rate: state out of range");
  if (!lazy_) return rates_[static_cast<std::size_t>(k)];
  {
    std::shared_lock lock(lazy_->mutex);
    auto it = lazy_->rows.find(k);
    if (it != lazy_->rows.end()) return it->second.g;
  }
  std::unique_lock lock(lazy_->mutex);
  auto& row = lazy_->rows[k];
  if (row.g == 0.0) row.g = total_rate(measure_, k);
  return row.g;
}

std::int64_t JumpKernel::sample_jump(std::int64_t k, double u) const {
  if (k < 2 || k > n_max_) throw InvariantError("JumpKernel::sample_jump: state out of range");
  if (k == 2) return 1;
  switch (measure_.family) {
    case Family::Kingman:
      return 1;
    case Family::GeneralPowerTail: {
      {
        std::shared_lock lock(lazy_->mutex);
        auto it = lazy_->rows.find(k);
        if (it != lazy_->rows.end() && !it->second.cdf.empty() &&
            (it->second.cdf.back() >= u ||
             static_cast<std::int64_t>(it->second.cdf.size()) == k - 1)) {
          const auto& cdf = it->second.cdf;
          auto pos = std::lower_bound(cdf.begin(), cdf.end(), u);
          if (pos == cdf.end()) return k - 1;
          return static_cast<std::int64_t>(pos - cdf.begin()) + 1;
        }
      }
      const double g = rate(k);
      std::unique_lock lock(lazy_->mutex);
      auto& cdf = lazy_->rows[k].cdf;
      const auto kd = static_cast<double>(k);
      while ((cdf.empty() || cdf.back() < u) && static_cast<std::int64_t>(cdf.size()) < k - 1) {
        const auto ell = static_cast<std::int64_t>(cdf.size()) + 1;
        const double atom =
            std::exp(log_binomial(kd, static_cast<double>(ell + 1))) * lambda_quadrature(measure_, k, ell + 1) / g;
        cdf.push_back((cdf.empty() ? 0.0 : cdf.back()) + atom);
      }
      auto pos = std::lower_bound(cdf.begin(), cdf.end(), u);
      if (pos == cdf.end()) return k - 1;
      return static_cast<std::int64_t>(pos - cdf.begin()) + 1;
    }
    default: {
      const auto kd = static_cast<double>(k);
      double p = first_atom_[static_cast<std::size_t>(k)];
      double cum = p;
      std::int64_t ell = 1;
      while (u > cum && ell < k - 1) {
        p *= atom_ratio(kd, static_cast<double>(ell), measure_.shape_a, measure_.shape_b);
        ++ell;
        cum += p;
      }
      return ell;
    }
  }
}

}  // namespace coalscope
