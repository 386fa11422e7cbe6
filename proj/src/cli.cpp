#include "coalscope/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "coalscope/chain.hpp"
#include "coalscope/error.hpp"
#include "coalscope/limits.hpp"
#include "coalscope/parallel.hpp"
#include "coalscope/special.hpp"
#include "coalscope/verify.hpp"

namespace coalscope {

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kFamilies{"kingman", "bs", "beta", "powerlaw", "mohle"};
const std::vector<std::string> kScenarios{"tau", "length", "mutations", "kingman", "bs", "mohle", "approx", "rates"};
const std::vector<std::string> kTables{"gn", "pmf", "limit", "vat"};

std::string join(const std::vector<std::string>& items) {
  std::string s;
  for (const auto& item : items) s += (s.empty() ? "" : ", ") + item;
  return s;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& text, const std::string& flag) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw UsageError(flag + ": expected a number, got '" + text + "'");
  }
  return v;
}

std::int64_t parse_int(const std::string& text, const std::string& flag) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw UsageError(flag + ": expected an integer, got '" + text + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::vector<std::int64_t> parse_int_list(const std::string& text, const std::string& flag) {
  std::vector<std::int64_t> out;
  for (const auto& part : split_list(text)) out.push_back(parse_int(part, flag));
  if (out.empty()) throw UsageError(flag + ": list is empty");
  return out;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  for (const auto& part : split_list(text)) out.push_back(parse_double(part, flag));
  if (out.empty()) throw UsageError(flag + ": list is empty");
  return out;
}

/// Raw flag text, kept as strings so that "given" is distinguishable from
/// "defaulted" when merging over a config file.
struct Flags {
  std::string target, family, alpha, c0, zeta, theta, n, gap_n, reps, t, seed, out, samples, format, threads,
      config, mode, points;
};

template <typename T>
std::vector<T> json_list(const nlohmann::json& v, const std::string& key) {
  if (v.is_array()) {
    std::vector<T> out;
    for (const auto& x : v) out.push_back(x.get<T>());
    if (out.empty()) throw UsageError("config '" + key + "': list is empty");
    return out;
  }
  if (v.is_string()) {
    if constexpr (std::is_same_v<T, double>) {
      return parse_double_list(v.get<std::string>(), "config '" + key + "'");
    } else {
      return parse_int_list(v.get<std::string>(), "config '" + key + "'");
    }
  }
  return {v.get<T>()};
}

void apply_config_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--config: cannot read '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("--config: invalid JSON in '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw UsageError("--config: top level must be an object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "family") c.family = v.get<std::string>();
      else if (key == "alpha") c.alpha = v.get<double>();
      else if (key == "c0") c.c0 = v.get<double>();
      else if (key == "zeta") c.zeta = v.get<double>();
      else if (key == "theta") c.theta = v.get<double>();
      else if (key == "n") c.n = json_list<std::int64_t>(v, key);
      else if (key == "gap_n") c.gap_n = json_list<std::int64_t>(v, key);
      else if (key == "reps") c.reps = v.get<std::int64_t>();
      else if (key == "t") c.t = json_list<double>(v, key);
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "out") c.out = v.get<std::string>();
      else if (key == "samples") c.samples_out = v.get<std::string>();
      else if (key == "format") c.format = v.get<std::string>();
      else if (key == "threads") c.threads = v.get<unsigned>();
      else if (key == "mode") c.mode = v.get<std::string>();
      else if (key == "points") c.points = v.get<std::int64_t>();
      else if (key == "command" || key == "target") continue;
      else throw UsageError("--config: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("--config: wrong value type: ") + e.what());
  }
}

RunConfig merge(const std::string& command, const Flags& f) {
  RunConfig c;
  c.command = command;
  c.threads = default_threads();
  c.family.clear();
  if (!f.config.empty()) apply_config_file(c, f.config);
  c.target = f.target;
  if (!f.family.empty()) c.family = f.family;
  if (c.family.empty()) {
    const bool own_family = command == "verify" && (c.target == "kingman" || c.target == "bs" || c.target == "mohle");
    c.family = own_family ? c.target : "beta";
  }
  if (!f.alpha.empty()) c.alpha = parse_double(f.alpha, "--alpha");
  if (!f.c0.empty()) c.c0 = parse_double(f.c0, "--c0");
  if (!f.zeta.empty()) c.zeta = parse_double(f.zeta, "--zeta");
  if (!f.theta.empty()) c.theta = parse_double(f.theta, "--theta");
  if (!f.n.empty()) c.n = parse_int_list(f.n, "--n");
  if (!f.gap_n.empty()) c.gap_n = parse_int_list(f.gap_n, "--gap-n");
  if (!f.reps.empty()) c.reps = parse_int(f.reps, "--reps");
  if (!f.t.empty()) c.t = parse_double_list(f.t, "--t");
  if (!f.seed.empty()) {
    const auto s = parse_int(f.seed, "--seed");
    if (s < 0) throw UsageError("--seed: must be nonnegative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (!f.out.empty()) c.out = f.out;
  if (!f.samples.empty()) c.samples_out = f.samples;
  if (!f.format.empty()) c.format = f.format;
  if (!f.threads.empty()) {
    const auto th = parse_int(f.threads, "--threads");
    if (th < 1) throw UsageError("--threads: must be a positive integer");
    c.threads = static_cast<unsigned>(th);
  }
  if (!f.mode.empty()) c.mode = f.mode;
  if (!f.points.empty()) c.points = parse_int(f.points, "--points");

  if (std::find(kFamilies.begin(), kFamilies.end(), c.family) == kFamilies.end()) {
    throw UsageError("--family: unknown family '" + c.family + "' (valid: " + join(kFamilies) + ")");
  }
  if ((c.family == "beta" || c.family == "powerlaw") && !(c.alpha > 1.0 && c.alpha < 2.0)) {
    throw UsageError("--alpha: must lie in (1,2) for family " + c.family + ", got " + format_number(c.alpha));
  }
  if (c.format != "csv" && c.format != "json") throw UsageError("--format: must be csv or json");
  if (c.reps < 1) throw UsageError("--reps: must be >= 1");
  if (c.theta < 0.0) throw UsageError("--theta: must be >= 0");
  if (c.points < 1) throw UsageError("--points: must be >= 1");
  for (auto n : c.n) {
    if (n < 2) throw UsageError("--n: every n must be >= 2");
  }
  for (auto n : c.gap_n) {
    if (n < 2) throw UsageError("--gap-n: every n must be >= 2");
  }
  if (c.mode != "L" && c.mode != "Lhat") throw UsageError("--mode: must be L or Lhat");
  return c;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void write_sidecar(const RunConfig& c, const std::string& data_path, double wall_seconds, nlohmann::json extra) {
  nlohmann::json meta;
  meta["tool"] = "coalscope";
  meta["version"] = kVersion;
  meta["command"] = c.command;
  meta["config"] = c.to_json();
  meta["data_file"] = data_path;
  meta["wall_time_seconds"] = wall_seconds;
  meta["seed_derivation"] =
      "per replicate: mt19937_64 seeded from splitmix64(seed xor fnv1a(tag)) mixed with splitmix64(index)";
  for (auto& [k, v] : extra.items()) meta[k] = v;
  auto out = open_output(data_path + ".meta.json");
  out << meta.dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + data_path + ".meta.json'");
}

/// Writes rows either as CSV or as a JSON array of objects.
void write_table(const std::string& path, const std::string& format, const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows) {
  auto out = open_output(path);
  if (format == "csv") {
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
      out << '\n';
    }
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : rows) {
      nlohmann::json obj = nlohmann::json::object();
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (std::isnan(row[i])) {
          obj[columns[i]] = nullptr;
        } else {
          obj[columns[i]] = row[i];
        }
      }
      arr.push_back(std::move(obj));
    }
    out << arr.dump(2) << '\n';
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::string default_out(const RunConfig& c) {
  if (!c.out.empty()) return c.out;
  std::string base = c.command + (c.target.empty() ? "" : "_" + c.target);
  if (c.command == "verify") return base + ".json";
  return base + "." + c.format;
}

//------------------------------------------------------------------------
// simulate
//------------------------------------------------------------------------

double scaled_statistic(const CoalescentMeasure& m, std::int64_t n, double t, std::int64_t tau,
                        const TreeStatistics& s, std::size_t grid_index, double theta) {
  const auto nd = static_cast<double>(n);
  if (m.has_power_tail()) {
    const double gamma = m.gamma();
    if (std::abs(t - gamma) <= 1e-12) {
      return centering_scaling(LimitScenario::TauLimit, m, n).apply(static_cast<double>(tau) / gamma);
    }
    const double centered = s.L_t[grid_index] - a_of_t(m, t) * std::pow(nd, 2.0 - m.alpha);
    return std::pow(nd, length_exponent(m.alpha)) * centered;
  }
  switch (m.family) {
    case Family::Kingman:
      return centering_scaling(LimitScenario::KingmanGumbel, m, n).apply(s.L_total);
    case Family::BolthausenSznitman:
      return centering_scaling(LimitScenario::BSStable, m, n).apply(s.L_total);
    default:
      return theta > 0.0 ? static_cast<double>(s.K_total) / (nd * theta) : std::nan("");
  }
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  if (c.n.empty()) throw UsageError("--n: simulate needs at least one sample size");
  const auto m = measure_from_config(c);
  const double gamma = m.gamma();
  std::vector<double> grid = c.t;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (gamma > 0.0) {
    if (grid.empty()) grid.push_back(gamma);
    for (double t : grid) {
      if (!(t > 0.0 && t <= gamma)) {
        throw UsageError("--t: every t must lie in (0, gamma] = (0, " + format_number(gamma) + "]");
      }
    }
  } else if (!grid.empty()) {
    throw UsageError("--t: family " + c.family + " has gamma = alpha-1 <= 0 and no time grid");
  }

  const auto start = std::chrono::steady_clock::now();
  const auto kernel = make_kernel(m, *std::max_element(c.n.begin(), c.n.end()));
  std::vector<std::vector<double>> rows;
  for (auto n : c.n) {
    std::vector<std::vector<std::vector<double>>> per_rep(static_cast<std::size_t>(c.reps));
    parallel_for(per_rep.size(), c.threads, [&](std::size_t i) {
      Rng rng = make_stream(c.seed, "simulate:" + std::to_string(n), i);
      const auto path = sample_jump_chain(kernel, n, rng);
      const auto s = tree_statistics(path, grid, c.theta, rng);
      const auto tau = path.tau();
      auto base = [&](double t) {
        return std::vector<double>{static_cast<double>(i), static_cast<double>(n), m.alpha, t,
                                   static_cast<double>(tau)};
      };
      if (grid.empty()) {
        auto row = base(std::nan(""));
        const double nan = std::nan("");
        row.insert(row.end(), {nan, nan, nan, nan, s.L_total, s.T_mrca,
                               scaled_statistic(m, n, 0.0, tau, s, 0, c.theta)});
        per_rep[i].push_back(std::move(row));
        return;
      }
      for (std::size_t g = 0; g < grid.size(); ++g) {
        auto row = base(grid[g]);
        row.insert(row.end(), {s.L_t[g], s.L_tilde_t[g], s.L_hat_t[g], static_cast<double>(s.K_t[g]), s.L_total,
                               s.T_mrca, scaled_statistic(m, n, grid[g], tau, s, g, c.theta)});
        per_rep[i].push_back(std::move(row));
      }
    });
    for (auto& rep_rows : per_rep) {
      for (auto& row : rep_rows) rows.push_back(std::move(row));
    }
  }
  const std::string path = default_out(c);
  write_table(path, c.format, record_columns(), rows);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_sidecar(c, path, wall, {{"rows", rows.size()}, {"columns", record_columns()}});
  out << "wrote " << rows.size() << " rows to " << path << '\n';
  return kExitOk;
}

//------------------------------------------------------------------------
// verify
//------------------------------------------------------------------------

std::vector<std::int64_t> n_or(const RunConfig& c, std::vector<std::int64_t> fallback) {
  return c.n.empty() ? fallback : c.n;
}

double t_or(const RunConfig& c, double fallback) { return c.t.empty() ? fallback : c.t.front(); }

void require_family(const RunConfig& c, const std::vector<std::string>& allowed, const std::string& scenario) {
  if (std::find(allowed.begin(), allowed.end(), c.family) == allowed.end()) {
    throw UnsupportedFamilyError("verify " + scenario + ": family " + c.family + " is not supported (use " +
                                 join(allowed) + ")");
  }
}

VerificationReport run_scenario(const RunConfig& c, const RunOptions& opts) {
  const std::string& s = c.target;
  if (s == "tau") {
    return verify_tau(measure_from_config(c), n_or(c, {500, 5000}), opts);
  }
  if (s == "length") {
    const auto m = measure_from_config(c);
    const bool concentration = c.mode == "L" && m.alpha >= kGoldenAlpha;
    return verify_length(m, n_or(c, concentration ? std::vector<std::int64_t>{2000, 20000} : std::vector<std::int64_t>{500, 5000}),
                         t_or(c, 0.25), c.mode == "L" ? LengthMode::L : LengthMode::Lhat, opts);
  }
  if (s == "mutations") {
    return verify_mutations(measure_from_config(c), n_or(c, {5000}), t_or(c, 0.25), c.theta, opts);
  }
  if (s == "kingman") {
    require_family(c, {"kingman"}, s);
    return verify_kingman(n_or(c, {5000}), opts);
  }
  if (s == "bs") {
    return verify_bs(measure_from_config(c), n_or(c, {100000}), opts);
  }
  if (s == "mohle") {
    const auto n = n_or(c, {5000});
    if (n.size() != 1) throw UsageError("--n: verify mohle takes a single n");
    return verify_mohle(measure_from_config(c), n.front(), c.theta, opts);
  }
  if (s == "approx") {
    const auto m = measure_from_config(c);
    return verify_approximations(m, n_or(c, {500, 2000, 8000}),
                                 c.gap_n.empty() ? std::vector<std::int64_t>{1000, 10000, 100000} : c.gap_n,
                                 t_or(c, m.gamma()), opts);
  }
  if (s == "rates") {
    return verify_rates(measure_from_config(c), opts);
  }
  throw UsageError("unknown scenario '" + s + "' (valid: " + join(kScenarios) + ")");
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  if (std::find(kScenarios.begin(), kScenarios.end(), c.target) == kScenarios.end()) {
    throw UsageError("unknown scenario '" + c.target + "' (valid: " + join(kScenarios) + ")");
  }
  RunOptions opts;
  opts.seed = c.seed;
  opts.reps = c.reps;
  opts.limit_reps = c.reps;
  opts.threads = c.threads;

  const auto start = std::chrono::steady_clock::now();
  const auto report = run_scenario(c, opts);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::string path = default_out(c);
  {
    auto file = open_output(path);
    file << report.to_json().dump(2) << '\n';
    if (!file) throw IoError("write failed for '" + path + "'");
  }
  if (!c.samples_out.empty()) {
    std::vector<std::vector<double>> rows;
    for (const auto& e : report.per_n) {
      for (std::size_t i = 0; i < e.samples.size(); ++i) {
        rows.push_back({0.0, static_cast<double>(e.n), static_cast<double>(i), e.samples[i]});
      }
    }
    for (std::size_t i = 0; i < report.limit_samples.size(); ++i) {
      rows.push_back({1.0, 0.0, static_cast<double>(i), report.limit_samples[i]});
    }
    write_table(c.samples_out, "csv", {"is_limit", "n", "index", "value"}, rows);
  }
  write_sidecar(c, path, wall, {{"pass", report.pass()}});

  out << "scenario " << report.scenario << ": " << (report.pass() ? "PASS" : "FAIL") << '\n';
  for (const auto& check : report.checks) {
    out << "  " << (check.pass ? "pass" : "FAIL") << "  " << check.name << " = " << format_number(check.value) << ' '
        << check.relation << ' ' << format_number(check.threshold) << (check.gating ? "" : "  (diagnostic)") << '\n';
  }
  for (const auto& note : report.notes) out << "  note: " << note << '\n';
  out << "report written to " << path << '\n';
  return report.pass() ? kExitOk : kExitVerificationFailed;
}

//------------------------------------------------------------------------
// tables
//------------------------------------------------------------------------

int cmd_tables(const RunConfig& c, std::ostream& out) {
  if (std::find(kTables.begin(), kTables.end(), c.target) == kTables.end()) {
    throw UsageError("unknown table '" + c.target + "' (valid: " + join(kTables) + ")");
  }
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  if (c.target == "gn" || c.target == "pmf") {
    if (c.n.empty()) throw UsageError("--n: table " + c.target + " needs at least one n");
    const auto m = measure_from_config(c);
    if (c.target == "gn") {
      columns = {"n", "g_n", "ratio"};
      for (auto n : c.n) {
        const double g = total_rate(m, n);
        const double ratio = m.has_power_tail()
                                 ? g / (m.c0 * gamma_fn(2.0 - m.alpha) * std::pow(static_cast<double>(n), m.alpha))
                                 : std::nan("");
        rows.push_back({static_cast<double>(n), g, ratio});
      }
    } else {
      columns = {"n", "ell", "pmf", "tail"};
      for (auto n : c.n) {
        const auto table = transition_table(m, n);
        double tail = 1.0;
        for (std::int64_t ell = 1; ell <= n - 1; ++ell) {
          rows.push_back({static_cast<double>(n), static_cast<double>(ell), table.at(ell), std::max(tail, 0.0)});
          tail -= table.at(ell);
        }
      }
    }
  } else if (c.target == "limit") {
    if (!(c.alpha > 1.0 && c.alpha < 2.0)) throw UsageError("--alpha: must lie in (1,2)");
    columns = {"k", "pmf", "tail"};
    for (std::int64_t k = 1; k <= c.points; ++k) {
      rows.push_back({static_cast<double>(k), limit_jump_pmf(c.alpha, k), limit_jump_tail(c.alpha, k)});
    }
  } else {
    const auto m = measure_from_config(c);
    if (!m.has_power_tail()) throw UsageError("--family: table vat needs alpha in (1,2)");
    columns = {"t", "v", "a", "kappa"};
    const double gamma = m.gamma();
    for (std::int64_t i = 1; i <= c.points; ++i) {
      const double t = gamma * static_cast<double>(i) / static_cast<double>(c.points + 1);
      rows.push_back({t, v_of_t(m.alpha, t), a_of_t(m, t), kappa_of_t(m.alpha, t)});
    }
  }
  const std::string path = default_out(c);
  write_table(path, c.format, columns, rows);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_sidecar(c, path, wall, {{"rows", rows.size()}, {"columns", columns}});
  out << "wrote " << rows.size() << " rows to " << path << '\n';
  return kExitOk;
}

void add_common_options(CLI::App* sub, Flags& f) {
  sub->add_option("--family", f.family, "kingman, bs, beta, powerlaw or mohle (default beta)");
  sub->add_option("--alpha", f.alpha, "alpha in (1,2) for beta and powerlaw (default 1.5)");
  sub->add_option("--c0", f.c0, "powerlaw: C0 of rho(t) ~ C0 t^-alpha (default (2-alpha)/alpha)");
  sub->add_option("--zeta", f.zeta, "powerlaw: remainder exponent zeta (default alpha)");
  sub->add_option("--theta", f.theta, "mutation rate (default 1)");
  sub->add_option("--n", f.n, "comma-separated sample sizes");
  sub->add_option("--reps", f.reps, "replicates (default 4000)");
  sub->add_option("--t", f.t, "comma-separated times in (0, alpha-1]");
  sub->add_option("--seed", f.seed, "master seed (default 20240531)");
  sub->add_option("--out", f.out, "output file");
  sub->add_option("--format", f.format, "csv or json (default csv)");
  sub->add_option("--threads", f.threads, "worker threads (default COALSCOPE_THREADS or all cores)");
  sub->add_option("--config", f.config, "JSON config file; flags override it");
}

}  // namespace

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["target"] = target;
  j["family"] = family;
  j["alpha"] = alpha;
  j["c0"] = c0 ? nlohmann::json(*c0) : nlohmann::json(nullptr);
  j["zeta"] = zeta ? nlohmann::json(*zeta) : nlohmann::json(nullptr);
  j["theta"] = theta;
  j["n"] = n;
  j["gap_n"] = gap_n;
  j["reps"] = reps;
  j["t"] = t;
  j["seed"] = seed;
  j["out"] = out;
  j["samples"] = samples_out;
  j["format"] = format;
  j["threads"] = threads;
  j["mode"] = mode;
  j["points"] = points;
  return j;
}

CoalescentMeasure measure_from_config(const RunConfig& c) {
  if (c.family == "kingman") return kingman();
  if (c.family == "bs") return bolthausen_sznitman();
  if (c.family == "mohle") return beta_shape(2.0, 1.0);
  if (c.family == "beta") return beta_coalescent(c.alpha);
  if (c.family == "powerlaw") {
    const double alpha = c.alpha;
    const double c0 = c.c0.value_or((2.0 - alpha) / alpha);
    if (!(c0 > 0.0)) throw UsageError("--c0: must be positive");
    const double scale = alpha * c0;
    return general_power_tail(alpha, c0, c.zeta.value_or(alpha),
                              [scale, alpha](double x) { return scale * std::pow(x, 1.0 - alpha); });
  }
  throw UsageError("--family: unknown family '" + c.family + "'");
}

const std::vector<std::string>& record_columns() {
  static const std::vector<std::string> columns{"replicate_index", "n",       "alpha",   "t",
                                                "tau_n",           "L_t",     "L_tilde_t", "L_hat_t",
                                                "K_t",             "L_total", "T_mrca",  "scaled_statistic"};
  return columns;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"coalscope: block-counting chains of Lambda-coalescents, tree lengths and their limit laws"};
  app.require_subcommand(1);
  Flags f;
  auto* simulate = app.add_subcommand("simulate", "simulate trees and write one row per (replicate, t)");
  add_common_options(simulate, f);
  auto* verify = app.add_subcommand("verify", "run a verification scenario and write a JSON report");
  verify->add_option("scenario", f.target, "one of: " + join(kScenarios))->required();
  add_common_options(verify, f);
  verify->add_option("--mode", f.mode, "length scenario: L or Lhat (default L)");
  verify->add_option("--gap-n", f.gap_n, "approx scenario: sample sizes of the deterministic gap");
  verify->add_option("--samples", f.samples, "also write the scaled samples as CSV");
  auto* tables = app.add_subcommand("tables", "write deterministic tables");
  tables->add_option("table", f.target, "one of: " + join(kTables))->required();
  add_common_options(tables, f);
  tables->add_option("--points", f.points, "rows for the limit and vat tables (default 100)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string command = app.got_subcommand(simulate) ? "simulate" : app.got_subcommand(verify) ? "verify" : "tables";
  try {
    const RunConfig config = merge(command, f);
    if (command == "simulate") return cmd_simulate(config, out);
    if (command == "verify") return cmd_verify(config, out);
    return cmd_tables(config, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnsupportedFamilyError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace coalscope
