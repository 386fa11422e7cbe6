#include "coalscope/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "coalscope/chain.hpp"
#include "coalscope/error.hpp"
#include "coalscope/limits.hpp"
#include "coalscope/parallel.hpp"
#include "coalscope/special.hpp"

namespace coalscope {

namespace {

constexpr double kEulerGamma = std::numbers::egamma;

Check make_check(std::string name, double value, double threshold, std::string relation, bool gating = true) {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.threshold = threshold;
  c.relation = std::move(relation);
  c.gating = gating;
  if (c.relation == "<") {
    c.pass = value < threshold;
  } else if (c.relation == "<=") {
    c.pass = value <= threshold;
  } else if (c.relation == ">") {
    c.pass = value > threshold;
  } else if (c.relation == ">=") {
    c.pass = value >= threshold;
  } else {
    throw InvariantError("make_check: unknown relation " + c.relation);
  }
  return c;
}

std::string stream_tag(const std::string& scenario, std::int64_t n) { return scenario + ":" + std::to_string(n); }

template <typename F>
std::vector<double> replicate(std::int64_t reps, unsigned threads, F&& draw) {
  if (reps < 1) throw ArgumentError("replicates must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(reps));
  parallel_for(out.size(), threads, [&](std::size_t i) { out[i] = draw(i); });
  return out;
}

std::vector<double> limit_draws(LimitScenario scenario, const LimitParams& params, const std::string& tag,
                                const RunOptions& opts) {
  return replicate(opts.limit_reps, opts.threads, [&](std::size_t i) {
    Rng rng = make_stream(opts.seed, tag + ":limit", i);
    return sample_limit(scenario, params, rng).value;
  });
}

void require_n_list(const std::vector<std::int64_t>& n_list, const char* what) {
  if (n_list.empty()) throw ArgumentError(std::string(what) + ": n list is empty");
  for (auto n : n_list) {
    if (n < 2) throw ArgumentError(std::string(what) + ": every n must be >= 2");
  }
}

std::int64_t max_n(const std::vector<std::int64_t>& n_list) {
  return *std::max_element(n_list.begin(), n_list.end());
}

VerificationReport base_report(std::string scenario, const CoalescentMeasure& m,
                               const std::vector<std::int64_t>& n_list, const RunOptions& opts) {
  VerificationReport r;
  r.scenario = std::move(scenario);
  r.measure = measure_json(m);
  r.n_list = n_list;
  r.replicates = opts.reps;
  r.seed = opts.seed;
  return r;
}

PerN per_n_entry(std::int64_t n, std::vector<double> samples, const std::vector<double>* limit) {
  PerN e;
  e.n = n;
  e.statistic = summarize(samples);
  if (limit != nullptr) e.ks = ks_two_sample(samples, *limit);
  e.samples = std::move(samples);
  return e;
}

/// KS p-value at the largest n, and strict decrease of the KS distance from
/// the first to the last n.
void add_ks_checks(VerificationReport& r, double p_min) {
  const auto& last = r.per_n.back();
  r.checks.push_back(make_check("ks_p_value_n" + std::to_string(last.n), last.ks->p_value, p_min, ">"));
  if (r.per_n.size() >= 2) {
    const auto& first = r.per_n.front();
    r.checks.push_back(make_check("ks_distance_decreasing_n" + std::to_string(first.n) + "_to_n" +
                                      std::to_string(last.n),
                                  last.ks->statistic, first.ks->statistic, "<"));
    std::vector<double> ns, ds;
    for (const auto& e : r.per_n) {
      ns.push_back(static_cast<double>(e.n));
      ds.push_back(std::max(e.ks->statistic, 1e-300));
    }
    r.trend = fit_loglog(ns, ds);
  }
}

void require_power_tail(const CoalescentMeasure& m, const char* what) {
  if (!m.has_power_tail()) {
    throw UnsupportedFamilyError(std::string(what) + ": requires a measure with alpha in (1,2), got " +
                                 m.describe());
  }
}

void require_open_time(const CoalescentMeasure& m, double t, const char* what) {
  if (!(t > 0.0 && t < m.gamma())) {
    throw ArgumentError(std::string(what) + ": t must lie in (0, gamma) = (0, " + std::to_string(m.gamma()) + ")");
  }
}

}  // namespace

bool VerificationReport::pass() const {
  if (degenerate) return false;
  bool any = false;
  for (const auto& c : checks) {
    if (!c.gating) continue;
    any = true;
    if (!c.pass) return false;
  }
  return any;
}

nlohmann::json summary_json(const Summary& s) {
  return {{"count", s.count}, {"mean", s.mean},     {"sd", s.sd},   {"min", s.min},
          {"q05", s.q05},     {"q25", s.q25},       {"median", s.median}, {"q75", s.q75},
          {"q95", s.q95},     {"max", s.max}};
}

nlohmann::json measure_json(const CoalescentMeasure& m) {
  nlohmann::json j{{"family", to_string(m.family)}, {"alpha", m.alpha}, {"c0", m.c0}, {"zeta", m.zeta}};
  if (m.is_beta_type()) {
    j["shape_a"] = m.shape_a;
    j["shape_b"] = m.shape_b;
  }
  return j;
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["scenario"] = scenario;
  j["measure"] = measure;
  j["n_list"] = n_list;
  j["replicates"] = replicates;
  j["t_grid"] = t_grid;
  j["theta"] = theta;
  j["seed"] = seed;
  j["degenerate"] = degenerate;
  j["per_n"] = nlohmann::json::array();
  for (const auto& e : per_n) {
    nlohmann::json row{{"n", e.n}, {"statistic", summary_json(e.statistic)}};
    if (e.ks) {
      row["ks_statistic"] = e.ks->statistic;
      row["ks_p_value"] = e.ks->p_value;
      row["ks_exact"] = e.ks->exact;
    }
    if (!e.extra.empty()) row["extra"] = e.extra;
    j["per_n"].push_back(std::move(row));
  }
  if (limit) j["limit"] = summary_json(*limit);
  if (trend) j["trend"] = {{"loglog_slope", trend->slope}, {"intercept", trend->intercept}};
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    j["checks"].push_back({{"name", c.name},
                           {"value", c.value},
                           {"threshold", c.threshold},
                           {"relation", c.relation},
                           {"gating", c.gating},
                           {"pass", c.pass}});
  }
  j["notes"] = notes;
  j["pass"] = pass();
  return j;
}

VerificationReport verify_tau(const CoalescentMeasure& m, const std::vector<std::int64_t>& n_list,
                              const RunOptions& opts) {
  require_power_tail(m, "verify_tau");
  require_n_list(n_list, "verify_tau");
  if (!(m.zeta > 1.0 - 1.0 / m.alpha)) {
    throw UnsupportedFamilyError("verify_tau: needs zeta > 1 - 1/alpha");
  }
  auto r = base_report("tau", m, n_list, opts);
  r.t_grid = {m.gamma()};
  const auto kernel = make_kernel(m, max_n(n_list));
  const auto params = LimitParams::for_measure(m, m.gamma());
  r.limit_samples = limit_draws(LimitScenario::TauLimit, params, "tau", opts);
  r.limit = summarize(r.limit_samples);
  for (auto n : n_list) {
    const auto c = centering_scaling(LimitScenario::TauLimit, m, n);
    auto samples = replicate(opts.reps, opts.threads, [&](std::size_t i) {
      Rng rng = make_stream(opts.seed, stream_tag("tau", n), i);
      const auto path = sample_jump_chain(kernel, n, rng);
      return c.apply(static_cast<double>(path.tau()) / m.gamma());
    });
    r.per_n.push_back(per_n_entry(n, std::move(samples), &r.limit_samples));
  }
  add_ks_checks(r, opts.tol.ks_p_min);
  return r;
}

VerificationReport verify_length(const CoalescentMeasure& m, const std::vector<std::int64_t>& n_list, double t,
                                 LengthMode mode, const RunOptions& opts) {
  require_power_tail(m, "verify_length");
  require_n_list(n_list, "verify_length");
  require_open_time(m, t, "verify_length");
  const double alpha = m.alpha;
  const bool concentration = mode == LengthMode::L && alpha >= kGoldenAlpha;
  auto r = base_report(mode == LengthMode::Lhat ? "length-lhat" : (concentration ? "length-concentration" : "length"),
                       m, n_list, opts);
  r.t_grid = {t};
  const auto kernel = make_kernel(m, max_n(n_list));
  const std::vector<double> grid{t};
  const double a = a_of_t(m, t);
  const double eps = opts.tol.concentration_eps;

  if (!concentration) {
    const auto scenario = mode == LengthMode::Lhat ? LimitScenario::LhatLimit : LimitScenario::LLimit;
    r.limit_samples = limit_draws(scenario, LimitParams::for_measure(m, t), r.scenario, opts);
    r.limit = summarize(r.limit_samples);
  } else {
    r.notes.push_back("alpha >= (1+sqrt5)/2: n^{-eps}(L_t - a(t) n^{2-alpha}) -> 0; checking its 95% quantile");
  }

  for (auto n : n_list) {
    const auto nd = static_cast<double>(n);
    std::vector<double> raw(static_cast<std::size_t>(opts.reps));
    auto samples = replicate(opts.reps, opts.threads, [&](std::size_t i) {
      Rng rng = make_stream(opts.seed, stream_tag(r.scenario, n), i);
      const auto path = sample_jump_chain(kernel, n, rng);
      const auto s = tree_statistics(path, grid, 0.0, rng);
      if (mode == LengthMode::Lhat) {
        raw[i] = s.L_hat_t[0];
        return centering_scaling(LimitScenario::LhatLimit, m, n, t).apply(s.L_hat_t[0]);
      }
      raw[i] = s.L_t[0];
      if (concentration) return std::pow(nd, -eps) * std::abs(s.L_t[0] - a * std::pow(nd, 2.0 - alpha));
      return centering_scaling(LimitScenario::LLimit, m, n, t).apply(s.L_t[0]);
    });
    auto entry = per_n_entry(n, std::move(samples), concentration ? nullptr : &r.limit_samples);
    if (mode == LengthMode::L) {
      const double lln = mean(raw) * std::pow(nd, alpha - 2.0);
      entry.extra["lln_mean"] = lln;
      entry.extra["a_t"] = a;
    }
    r.per_n.push_back(std::move(entry));
  }

  const auto& last = r.per_n.back();
  if (concentration) {
    const auto& first = r.per_n.front();
    if (r.per_n.size() < 2) throw ArgumentError("verify_length: the concentration mode needs two or more n values");
    r.checks.push_back(make_check("q95_decreasing_n" + std::to_string(first.n) + "_to_n" + std::to_string(last.n),
                                  last.statistic.q95, first.statistic.q95, "<"));
  } else {
    add_ks_checks(r, opts.tol.ks_p_min);
    // The trend is informative; only the largest n gates the KS result.
    if (r.checks.size() > 1) r.checks[1].gating = false;
  }
  if (mode == LengthMode::L) {
    const double rel = std::abs(last.extra["lln_mean"].get<double>() / a - 1.0);
    r.checks.push_back(make_check("lln_relative_error_n" + std::to_string(last.n), rel, opts.tol.lln_rel, "<"));
  }
  return r;
}

VerificationReport verify_mutations(const CoalescentMeasure& m, const std::vector<std::int64_t>& n_list, double t,
                                    double theta, const RunOptions& opts) {
  require_power_tail(m, "verify_mutations");
  require_n_list(n_list, "verify_mutations");
  require_open_time(m, t, "verify_mutations");
  if (!(theta > 0.0)) throw ArgumentError("verify_mutations: theta must be positive");
  LimitScenario scenario = LimitScenario::MutationCritical;
  if (m.alpha < kSqrt2 - 1e-6) {
    scenario = LimitScenario::MutationLow;
  } else if (m.alpha > kSqrt2 + 1e-6) {
    scenario = LimitScenario::MutationHigh;
  }
  auto r = base_report(to_string(scenario), m, n_list, opts);
  r.t_grid = {t};
  r.theta = theta;
  const auto kernel = make_kernel(m, max_n(n_list));
  const std::vector<double> grid{t};
  auto params = LimitParams::for_measure(m, t, theta);
  r.limit_samples = limit_draws(scenario, params, r.scenario, opts);
  r.limit = summarize(r.limit_samples);
  for (auto n : n_list) {
    const auto c = centering_scaling(scenario, m, n, t, theta);
    auto samples = replicate(opts.reps, opts.threads, [&](std::size_t i) {
      Rng rng = make_stream(opts.seed, stream_tag(r.scenario, n), i);
      const auto path = sample_jump_chain(kernel, n, rng);
      const auto s = tree_statistics(path, grid, theta, rng);
      return c.apply(static_cast<double>(s.K_t[0]));
    });
    r.per_n.push_back(per_n_entry(n, std::move(samples), &r.limit_samples));
  }
  add_ks_checks(r, opts.tol.ks_p_min);
  if (r.checks.size() > 1) r.checks[1].gating = false;
  return r;
}

VerificationReport verify_kingman(const std::vector<std::int64_t>& n_list, const RunOptions& opts) {
  require_n_list(n_list, "verify_kingman");
  const auto m = kingman();
  auto r = base_report("kingman", m, n_list, opts);
  const auto kernel = make_kernel(m, max_n(n_list));
  r.limit_samples = limit_draws(LimitScenario::KingmanGumbel, LimitParams{}, "kingman", opts);
  r.limit = summarize(r.limit_samples);
  for (auto n : n_list) {
    const auto c = centering_scaling(LimitScenario::KingmanGumbel, m, n);
    std::vector<double> ratio(static_cast<std::size_t>(opts.reps));
    auto samples = replicate(opts.reps, opts.threads, [&](std::size_t i) {
      Rng rng = make_stream(opts.seed, stream_tag("kingman", n), i);
      const auto path = sample_jump_chain(kernel, n, rng);
      const auto s = tree_statistics(path, {}, 0.0, rng);
      ratio[i] = s.L_total / (2.0 * std::log(static_cast<double>(n)));
      return c.apply(s.L_total);
    });
    auto entry = per_n_entry(n, std::move(samples), &r.limit_samples);
    entry.extra["lln_mean"] = mean(ratio);
    r.per_n.push_back(std::move(entry));
  }
  add_ks_checks(r, opts.tol.ks_p_min);
  if (r.checks.size() > 1) r.checks[1].gating = false;
  const auto& last = r.per_n.back();
  r.checks.push_back(make_check("gumbel_mean_abs_error_n" + std::to_string(last.n),
                                std::abs(last.statistic.mean - kEulerGamma), opts.tol.gumbel_mean_abs, "<"));
  // E[L/(2 log n)] = H_{n-1}/log n, so this ratio approaches 1 only at rate 1/log n.
  r.checks.push_back(make_check("lln_relative_error_n" + std::to_string(last.n),
                                std::abs(last.extra["lln_mean"].get<double>() - 1.0), opts.tol.kingman_lln_rel, "<",
                                false));
  return r;
}

VerificationReport verify_bs(const CoalescentMeasure& m, const std::vector<std::int64_t>& n_list,
                             const RunOptions& opts) {
  if (m.family != Family::BolthausenSznitman) {
    throw UnsupportedFamilyError("verify_bs: needs the Bolthausen-Sznitman coalescent, got " + m.describe());
  }
  require_n_list(n_list, "verify_bs");
  auto r = base_report("bs", m, n_list, opts);
  r.notes.push_back("log-speed convergence: tolerances are deliberately loose");
  const auto kernel = make_kernel(m, max_n(n_list));
  r.limit_samples = limit_draws(LimitScenario::BSStable, LimitParams{}, "bs", opts);
  r.limit = summarize(r.limit_samples);
  for (auto n : n_list) {
    const auto c = centering_scaling(LimitScenario::BSStable, m, n);
    const auto nd = static_cast<double>(n);
    std::vector<double> ratio(static_cast<std::size_t>(opts.reps));
    auto samples = replicate(opts.reps, opts.threads, [&](std::size_t i) {
      Rng rng = make_stream(opts.seed, stream_tag("bs", n), i);
      const auto path = sample_jump_chain(kernel, n, rng);
      const auto s = tree_statistics(path, {}, 0.0, rng);
      ratio[i] = std::log(nd) / nd * s.L_total;
      return c.apply(s.L_total);
    });
    auto entry = per_n_entry(n, std::move(samples), &r.limit_samples);
    entry.extra["lln_mean"] = mean(ratio);
    entry.extra["a_n"] = c.center;
    entry.extra["b_n"] = c.scale;
    r.per_n.push_back(std::move(entry));
  }
  add_ks_checks(r, opts.tol.bs_ks_p_min);
  if (r.checks.size() > 1) r.checks[1].gating = false;
  const auto& last = r.per_n.back();
  r.checks.push_back(make_check("lln_relative_error_n" + std::to_string(last.n),
                                std::abs(last.extra["lln_mean"].get<double>() - 1.0), opts.tol.bs_lln_rel, "<"));
  return r;
}

VerificationReport verify_mohle(const CoalescentMeasure& m, std::int64_t n, double theta, const RunOptions& opts) {
  if (!has_finite_inverse_moment(m)) {
    throw UnsupportedFamilyError("verify_mohle: needs a measure with finite integral of x^-1 Lambda(dx), got " +
                                 m.describe());
  }
  if (n < 2) throw ArgumentError("verify_mohle: n must be >= 2");
  if (theta < 0.0) throw ArgumentError("verify_mohle: theta must be >= 0");
  auto r = base_report("mohle", m, {n}, opts);
  r.theta = theta;
  if (theta == 0.0) {
    r.degenerate = true;
    r.notes.push_back("theta = 0: every mutation count is 0 and K/(n theta) is undefined");
    return r;
  }
  const auto kernel = make_kernel(m, n);
  const auto nd = static_cast<double>(n);
  auto samples = replicate(opts.reps, opts.threads, [&](std::size_t i) {
    Rng rng = make_stream(opts.seed, stream_tag("mohle", n), i);
    const auto path = sample_jump_chain(kernel, n, rng);
    const auto s = tree_statistics(path, {}, theta, rng);
    return static_cast<double>(s.K_total) / (nd * theta);
  });
  double second = 0.0;
  for (double x : samples) second += x * x;
  second /= static_cast<double>(samples.size());
  auto entry = per_n_entry(n, std::move(samples), nullptr);
  const double m1 = mohle_moment(m, 1);
  const double m2 = mohle_moment(m, 2);
  entry.extra["first_moment"] = entry.statistic.mean;
  entry.extra["second_moment"] = second;
  entry.extra["first_moment_limit"] = m1;
  entry.extra["second_moment_limit"] = m2;
  r.checks.push_back(
      make_check("first_moment_relative_error", std::abs(entry.statistic.mean / m1 - 1.0), opts.tol.mohle_first_rel, "<"));
  r.checks.push_back(
      make_check("second_moment_relative_error", std::abs(second / m2 - 1.0), opts.tol.mohle_second_rel, "<"));
  r.per_n.push_back(std::move(entry));
  return r;
}

VerificationReport verify_approximations(const CoalescentMeasure& m, const std::vector<std::int64_t>& variance_n,
                                         const std::vector<std::int64_t>& gap_n, double t, const RunOptions& opts) {
  require_power_tail(m, "verify_approximations");
  require_n_list(variance_n, "verify_approximations");
  require_n_list(gap_n, "verify_approximations");
  const double gamma = m.gamma();
  if (!(t > 0.0 && t <= gamma)) throw ArgumentError("verify_approximations: t must lie in (0, gamma]");
  std::vector<std::int64_t> all = variance_n;
  all.insert(all.end(), gap_n.begin(), gap_n.end());
  auto r = base_report("approx", m, all, opts);
  r.t_grid = {t};
  const auto kernel = make_kernel(m, max_n(all));
  const std::vector<double> grid{t};
  const double alpha = m.alpha;
  const double lead = m.c0 * gamma_fn(2.0 - alpha);

  std::vector<double> ns, second_moments;
  for (auto n : variance_n) {
    auto samples = replicate(opts.reps, opts.threads, [&](std::size_t i) {
      Rng rng = make_stream(opts.seed, stream_tag("approx-variance", n), i);
      const auto path = sample_jump_chain(kernel, n, rng);
      const auto s = tree_statistics(path, grid, 0.0, rng);
      const double d = s.L_t[0] - s.L_tilde_t[0];
      return d * d;
    });
    auto entry = per_n_entry(n, std::move(samples), nullptr);
    entry.extra["quantity"] = "E[(L_t - Ltilde_t)^2]";
    entry.extra["standard_error"] = standard_error(entry.samples);
    ns.push_back(static_cast<double>(n));
    second_moments.push_back(entry.statistic.mean);
    r.per_n.push_back(std::move(entry));
  }
  const double expected_slope = 3.0 - 2.0 * alpha;
  if (ns.size() >= 2) r.trend = fit_loglog(ns, second_moments);
  const auto [lo, hi] = std::minmax_element(second_moments.begin(), second_moments.end());
  const double spread = *hi / *lo;
  if (alpha < 1.5) {
    if (!r.trend) throw ArgumentError("verify_approximations: the slope check needs two or more n values");
    r.checks.push_back(make_check("variance_slope_abs_error", std::abs(r.trend->slope - expected_slope),
                                  opts.tol.slope_tol, "<="));
  } else if (alpha > 1.5) {
    r.checks.push_back(make_check("variance_max_over_min", spread, opts.tol.bounded_ratio, "<"));
  } else {
    r.notes.push_back("alpha = 3/2: log-corrected variance regime, reported only");
    r.checks.push_back(make_check("variance_max_over_min", spread, opts.tol.bounded_ratio, "<", false));
  }

  std::vector<double> gaps;
  for (auto n : gap_n) {
    auto samples = replicate(opts.reps, opts.threads, [&](std::size_t i) {
      Rng rng = make_stream(opts.seed, stream_tag("approx-gap", n), i);
      const auto path = sample_jump_chain(kernel, n, rng);
      const auto s = tree_statistics(path, grid, 0.0, rng);
      return std::abs(s.L_tilde_t[0] - s.L_hat_t[0] / lead);
    });
    auto entry = per_n_entry(n, std::move(samples), nullptr);
    entry.extra["quantity"] = "|Ltilde_t - Lhat_t/(C0 Gamma(2-alpha))|";
    gaps.push_back(entry.statistic.mean);
    r.per_n.push_back(std::move(entry));
  }
  const double growth = *std::max_element(gaps.begin(), gaps.end()) / gaps.front();
  if (m.zeta > 2.0 - alpha) {
    r.checks.push_back(make_check("gap_max_over_first", growth, opts.tol.bounded_ratio, "<"));
  } else {
    std::vector<double> gn(gap_n.begin(), gap_n.end());
    const double slope = gaps.size() >= 2 ? fit_loglog(gn, gaps).slope : 0.0;
    r.checks.push_back(make_check("gap_slope", slope, 2.0 - alpha - m.zeta + opts.tol.slope_tol, "<="));
  }
  return r;
}

VerificationReport verify_rates(const CoalescentMeasure& m, const RunOptions& opts) {
  VerificationReport r;
  r.scenario = "rates";
  r.measure = measure_json(m);
  r.seed = opts.seed;
  const bool quadrature_only = m.family == Family::GeneralPowerTail;

  double worst_dual = 0.0;
  if (m.family == Family::Kingman) {
    for (std::int64_t n = 2; n <= 1000; ++n) {
      const double g = total_rate(m, n);
      worst_dual = std::max(worst_dual, std::abs(g - static_cast<double>(n * (n - 1) / 2)));
    }
    r.checks.push_back(make_check("kingman_rate_abs_error", worst_dual, 0.0, "<="));
  } else {
    for (std::int64_t n = 2; n <= 1000; ++n) {
      worst_dual = std::max(worst_dual, total_rate_forms(m, n, 1.0).relative_gap);
    }
    r.checks.push_back(make_check("dual_form_max_relative_gap", worst_dual, opts.tol.dual_form_rel, "<="));
  }

  double worst_sum = 0.0;
  double worst_tail = 0.0;
  const std::vector<std::int64_t> table_n =
      quadrature_only ? std::vector<std::int64_t>{2, 10, 100, 1000} : std::vector<std::int64_t>{2, 10, 100, 1000, 10000};
  for (auto n : table_n) {
    const auto table = transition_table(m, n);
    double sum = 0.0;
    for (double p : table.pmf) {
      if (p < 0.0) throw InvariantError("verify_rates: negative pmf entry");
      sum += p;
    }
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
  }
  r.checks.push_back(make_check("pmf_sum_abs_error", worst_sum, opts.tol.pmf_sum_abs, "<="));
  if (m.family != Family::Kingman) {
    for (std::int64_t n : {5, 50, 400}) {
      const auto table = transition_table(m, n);
      for (std::int64_t k = 1; k <= n - 1; k += std::max<std::int64_t>(1, n / 17)) {
        worst_tail = std::max(worst_tail, std::abs(first_jump_tail(m, n, k) - table.tail(k)));
      }
    }
    r.checks.push_back(make_check("tail_pmf_abs_error", worst_tail, opts.tol.tail_abs, "<="));
  }

  if (m.has_power_tail()) {
    const auto rows = gn_asymptote_check(m, {1000, 10000, 100000, 1000000});
    nlohmann::json gn = nlohmann::json::array();
    for (const auto& row : rows) gn.push_back({{"n", row.n}, {"g_n", row.g_n}, {"ratio", row.ratio}, {"residual", row.residual}});
    r.notes.push_back("g_n asymptote rows: " + gn.dump());
    r.checks.push_back(make_check("gn_ratio_abs_error_n1000000", std::abs(rows.back().ratio - 1.0),
                                  opts.tol.gn_ratio_abs, "<="));

    std::vector<double> gaps;
    for (std::int64_t n : {100, 1000, 10000}) {
      double gap = 0.0;
      for (std::int64_t k = 1; k <= 20; ++k) {
        gap = std::max(gap, std::abs(first_jump_tail(m, n, k) - limit_jump_tail(m.alpha, k)));
      }
      gaps.push_back(gap);
    }
    r.notes.push_back("jump-law tail gaps at n = 100, 1000, 10000: " + nlohmann::json(gaps).dump());
    const bool monotone = gaps[1] < gaps[0] && gaps[2] < gaps[1];
    r.checks.push_back(make_check("jump_tail_gap_monotone", monotone ? 1.0 : 0.0, 1.0, ">="));
    r.checks.push_back(make_check("jump_tail_gap_n10000", gaps.back(), opts.tol.jump_tail_gap, "<"));
  }
  return r;
}

VerificationReport verify_stable_laplace(const std::vector<double>& alphas, const std::vector<double>& t_fractions,
                                         const std::vector<double>& us, std::int64_t draws, const RunOptions& opts) {
  VerificationReport r;
  r.scenario = "stable-laplace";
  r.seed = opts.seed;
  r.replicates = draws;
  r.t_grid = t_fractions;
  std::uint64_t cell = 0;
  for (double alpha : alphas) {
    const double gamma = alpha - 1.0;
    for (double frac : t_fractions) {
      const double t = frac * gamma;
      const double scale = std::pow(t / gamma, 1.0 / alpha);
      const auto v = replicate(draws, opts.threads, [&](std::size_t i) {
        Rng rng = make_stream(opts.seed, "stable-laplace:" + std::to_string(cell), i);
        return scale * sample_stable_unit(alpha, rng);
      });
      ++cell;
      for (double u : us) {
        std::vector<double> terms(v.size());
        std::transform(v.begin(), v.end(), terms.begin(), [u](double x) { return std::exp(-u * x); });
        const double est = mean(terms);
        const double se = standard_error(terms);
        const double target = std::exp(t * std::pow(u, alpha) / gamma);
        char name[96];
        std::snprintf(name, sizeof name, "laplace_alpha%.2f_t%.4f_u%.2f_in_se", alpha, t, u);
        r.checks.push_back(make_check(name, std::abs(est - target) / se, opts.tol.laplace_se, "<="));
      }
    }
  }
  return r;
}

VerificationReport verify_lhat_samplers(double alpha, double t, const RunOptions& opts) {
  const auto m = beta_coalescent(alpha);
  require_open_time(m, t, "verify_lhat_samplers");
  VerificationReport r;
  r.scenario = "lhat-samplers";
  r.measure = measure_json(m);
  r.seed = opts.seed;
  r.replicates = opts.reps;
  r.t_grid = {t};
  auto oneshot = LimitParams::for_measure(m, t);
  auto path = oneshot;
  path.method = LimitMethod::Path;
  auto a = replicate(opts.reps, opts.threads, [&](std::size_t i) {
    Rng rng = make_stream(opts.seed, "lhat-samplers:oneshot", i);
    return sample_limit(LimitScenario::LhatLimit, oneshot, rng).value;
  });
  r.limit_samples = replicate(opts.limit_reps, opts.threads, [&](std::size_t i) {
    Rng rng = make_stream(opts.seed, "lhat-samplers:path", i);
    return sample_limit(LimitScenario::LhatLimit, path, rng).value;
  });
  r.limit = summarize(r.limit_samples);
  PerN e;
  e.statistic = summarize(a);
  e.ks = ks_two_sample(a, r.limit_samples);
  e.samples = std::move(a);
  r.checks.push_back(make_check("ks_p_value_path_vs_oneshot", e.ks->p_value, opts.tol.ks_p_min, ">"));
  r.per_n.push_back(std::move(e));
  return r;
}

}  // namespace coalscope
