#include "commands.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace urnlab::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kSchema = "urnlab-report/1";
constexpr const char* kCsvVersion = "# urnlab-csv v1";

template <class K>
double mubar(const K& kernel, const TestFunction& f) {
  return measure_integrate(kernel.intensity(), f) / kernel.intensity().total_mass();
}

json spectral_json(const SpectralConstants& sc) {
  json j{{"lambda1", sc.lambda1},
         {"lambda2", sc.lambda2},
         {"mu_a", sc.mu_a},
         {"rho", sc.rho},
         {"regime", to_string(classify_regime(sc))}};
  if (sc.rho_exact) j["rho_exact"] = to_string(*sc.rho_exact);
  return j;
}

json outcome_json(const TestOutcome& t) {
  return {{"name", t.name},
          {"observed", t.observed},
          {"predicted", t.predicted},
          {"standard_error", t.standard_error},
          {"p_value", t.p_value},
          {"tolerance", t.tolerance},
          {"passed", t.passed},
          {"detail", t.detail}};
}

json rational_json(const Rational& r) { return {{"rational", to_string(r)}, {"decimal", to_double(r)}}; }

std::string output_dir(const Config& cfg) { return cfg.output_dir; }

std::size_t batch_count(const Config& cfg) {
  return (cfg.replicas + cfg.batch_size - 1) / cfg.batch_size;
}

std::string batch_file(const std::string& kind, std::size_t b) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%04zu.csv", kind.c_str(), b);
  return buf;
}

std::vector<std::string> csv_columns(const Config& cfg) {
  std::vector<std::string> cols{"replica", "t", "n", "total"};
  for (const auto& o : cfg.observables) cols.push_back("obs_" + o.name);
  cols.push_back("M_a");
  for (const auto& t : cfg.trackers) cols.push_back("M_" + t);
  for (const auto& t : cfg.trackers) cols.push_back("opt_bracket_" + t);
  for (const auto& t : cfg.trackers) cols.push_back("pred_bracket_" + t);
  return cols;
}

std::string join_columns(const std::vector<std::string>& cols) {
  std::string s;
  for (std::size_t i = 0; i < cols.size(); ++i) s += (i ? "," : "") + cols[i];
  return s;
}

template <class K>
EngineOptions engine_options(const Config& cfg, const K& kernel) {
  EngineOptions opt;
  for (const auto& o : cfg.observables) opt.observables.push_back({o.name, o.f});
  for (const auto& name : cfg.trackers) {
    const auto& f = cfg.observables[cfg.observable_index(name)].f;
    opt.centered.push_back({name, f.shifted(-mubar(kernel, f))});
  }
  return opt;
}

void write_csv(const fs::path& path, const Config& cfg, const std::string& checkpoints,
               std::size_t first_replica, const std::vector<Trajectory>& trajectories) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << kCsvVersion << "\n# config-sha256 " << cfg.sha256() << "\n# checkpoints " << checkpoints
      << "\n" << join_columns(csv_columns(cfg)) << "\n";
  for (std::size_t r = 0; r < trajectories.size(); ++r) {
    for (const auto& cp : trajectories[r].checkpoints) {
      out << first_replica + r << ',' << format_double(cp.t) << ',' << cp.n << ',' << cp.total;
      for (double v : cp.observables) out << ',' << format_double(v);
      out << ',' << format_double(cp.m_a);
      for (double v : cp.martingales) out << ',' << format_double(v);
      for (double v : cp.optional_brackets) out << ',' << format_double(v);
      for (double v : cp.predictable_brackets) out << ',' << format_double(v);
      out << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text << '\n';
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

// Rows of one checkpoint kind, indexed [replica][checkpoint][column].
using CheckpointTable = std::vector<std::vector<std::vector<double>>>;

CheckpointTable read_checkpoints(const Config& cfg, const std::string& kind, std::size_t per_replica) {
  const fs::path dir = output_dir(cfg);
  const std::string expected_header = join_columns(csv_columns(cfg));
  const std::string hash = cfg.sha256();
  CheckpointTable table(cfg.replicas);
  std::vector<std::size_t> seen(cfg.replicas, 0);
  for (std::size_t b = 0; b < batch_count(cfg); ++b) {
    const fs::path path = dir / batch_file(kind, b);
    std::ifstream in(path);
    if (!in) throw ConfigError("missing simulation output " + path.string() + "; run simulate first");
    std::string line;
    std::getline(in, line);
    if (line != kCsvVersion) throw IntegrityError(path.string() + ": unsupported CSV version");
    std::getline(in, line);
    if (line != "# config-sha256 " + hash) {
      throw HashMismatchError(path.string() + " was produced by a different configuration");
    }
    std::getline(in, line);
    std::getline(in, line);
    if (line != expected_header) throw IntegrityError(path.string() + ": unexpected columns");
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::vector<double> row;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
      const auto r = static_cast<std::size_t>(row.at(0));
      if (r >= cfg.replicas || row.size() != csv_columns(cfg).size()) {
        throw IntegrityError(path.string() + ": malformed row");
      }
      ++seen[r];
      table[r].push_back(std::move(row));
    }
  }
  for (std::size_t r = 0; r < cfg.replicas; ++r) {
    if (seen[r] != per_replica) {
      throw IntegrityError("replica " + std::to_string(r) + " has " + std::to_string(seen[r]) +
                           " " + kind + " checkpoints, expected " + std::to_string(per_replica));
    }
  }
  return table;
}

struct Columns {
  std::size_t t = 1, n = 2, total = 3, obs = 4, m_a, mart, opt, pred;
  explicit Columns(const Config& cfg) {
    m_a = obs + cfg.observables.size();
    mart = m_a + 1;
    opt = mart + cfg.trackers.size();
    pred = opt + cfg.trackers.size();
  }
};

// ---------------------------------------------------------------------------

template <class K>
int simulate_with(const Config& cfg, const K& kernel, unsigned threads, std::ostream& out,
                  std::ostream& err) {
  if (cfg.horizons.empty() && cfg.times.empty()) {
    throw ConfigError("field 'horizons': simulate needs horizons or times");
  }
  const fs::path dir = output_dir(cfg);
  fs::create_directories(dir);
  const auto options = engine_options(cfg, kernel);
  const auto sc = spectral_constants(kernel);

  struct Lln {
    std::vector<double> ubar;
  };
  std::vector<Lln> lln(cfg.observables.size());
  double max_growth = 0.0;
  std::size_t flagged = 0;
  json files{{"steps", json::array()}, {"times", json::array()}};

  for (std::size_t b = 0; b < batch_count(cfg); ++b) {
    const std::size_t first = b * cfg.batch_size;
    const std::size_t count = std::min<std::size_t>(cfg.batch_size, cfg.replicas - first);
    struct Result {
      Trajectory steps, times;
      GrowthDiagnostic growth;
    };
    auto results = run_replicas(count, threads, [&](std::size_t k) {
      Engine<K> engine(kernel, cfg.u0, cfg.base_seed, static_cast<std::uint32_t>(first + k), options);
      auto [steps, times] = engine.run(cfg.horizons, cfg.times);
      return Result{std::move(steps), std::move(times), engine.growth()};
    });
    std::vector<Trajectory> steps, times;
    for (auto& r : results) {
      const auto& last = r.steps.checkpoints.empty() ? r.times.checkpoints.back()
                                                     : r.steps.checkpoints.back();
      for (std::size_t i = 0; i < lln.size(); ++i) {
        lln[i].ubar.push_back(last.observables[i] / static_cast<double>(last.total));
      }
      max_growth = std::max(max_growth, r.growth.ratio);
      flagged += r.growth.flagged ? 1 : 0;
      steps.push_back(std::move(r.steps));
      times.push_back(std::move(r.times));
    }
    if (!cfg.horizons.empty()) {
      write_csv(dir / batch_file("steps", b), cfg, "steps", first, steps);
      files["steps"].push_back(batch_file("steps", b));
    }
    if (!cfg.times.empty()) {
      write_csv(dir / batch_file("times", b), cfg, "times", first, times);
      files["times"].push_back(batch_file("times", b));
    }
  }

  json lln_json = json::array();
  for (std::size_t i = 0; i < lln.size(); ++i) {
    const double target = mubar(kernel, cfg.observables[i].f);
    double worst = 0.0;
    for (double u : lln[i].ubar) worst = std::max(worst, std::abs(u - target));
    lln_json.push_back({{"observable", cfg.observables[i].name},
                        {"mubar", target},
                        {"mean_ubar", stats::mean(lln[i].ubar)},
                        {"mean_deviation", stats::mean(lln[i].ubar) - target},
                        {"max_abs_deviation", worst}});
  }
  json summary{{"schema", kSchema},
               {"kind", "simulation"},
               {"config_sha256", cfg.sha256()},
               {"kernel", kernel.name()},
               {"spectral", spectral_json(sc)},
               {"replicas", cfg.replicas},
               {"base_seed", cfg.base_seed},
               {"horizons", cfg.horizons},
               {"times", cfg.times},
               {"files", files},
               {"lln", lln_json},
               {"growth", {{"gamma", kernel.mean_total_replacement()},
                           {"max_ratio", max_growth},
                           {"flagged_replicas", flagged}}}};
  if (flagged > 0) err << "warning: " << flagged << " replicas grow faster than declared\n";
  const std::string text = dump_json(summary, 2);
  write_text(dir / "summary.json", text);
  out << text << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

template <class K>
int analyze_with(const Config& cfg, const K& kernel, std::ostream& out, std::ostream&) {
  const fs::path dir = output_dir(cfg);
  std::ifstream sin(dir / "summary.json");
  if (!sin) throw ConfigError("no simulation outputs in " + dir.string() + "; run simulate first");
  const json summary = json::parse(sin);
  if (summary.value("config_sha256", "") != cfg.sha256()) {
    throw HashMismatchError("outputs in " + dir.string() + " were produced by a different configuration");
  }

  const auto sc = spectral_constants(kernel);
  const Regime regime = classify_regime(sc);
  const Columns col(cfg);
  const auto& tol = cfg.tolerances;
  const std::size_t nobs = cfg.observables.size();
  std::vector<double> mu_bar(nobs);
  std::vector<bool> degenerate(nobs);
  for (std::size_t i = 0; i < nobs; ++i) {
    const auto& f = cfg.observables[i].f;
    mu_bar[i] = mubar(kernel, f);
    degenerate[i] = measure_integrate(kernel.intensity(), f * f) == 0.0;
  }

  json skipped = json::array();
  std::vector<std::string> selected = cfg.tests;
  if (selected.empty()) {
    selected.push_back("lln");
    if (cfg.replicas < 500) {
      skipped.push_back({{"test", "distributional"}, {"reason", "fewer than 500 replicas"}});
    } else if (regime == Regime::kSupercritical) {
      if (cfg.horizons.size() >= 3) selected.push_back("supercritical");
      if (std::find(degenerate.begin(), degenerate.end(), true) != degenerate.end()) {
        selected.push_back("degeneracy");
      }
    } else {
      selected.push_back("bridge");
      if (nobs >= 2) selected.push_back("covariance");
      if (regime == Regime::kSubcritical && !cfg.times.empty() && cfg.time_scale > 0.0) {
        selected.push_back("functional");
      }
    }
    if (!cfg.times.empty() && cfg.replicas >= 2) selected.push_back("martingale");
  }
  auto wants = [&](const char* name) {
    return std::find(selected.begin(), selected.end(), name) != selected.end();
  };

  CheckpointTable steps, times;
  if (!cfg.horizons.empty()) steps = read_checkpoints(cfg, "steps", cfg.horizons.size());
  if (!cfg.times.empty()) times = read_checkpoints(cfg, "times", cfg.times.size());
  auto need_steps = [&](const char* test) {
    if (steps.empty()) throw ConfigError(std::string("test '") + test + "' needs step horizons");
  };

  // rescaled fluctuation of observable i at step checkpoint h, per replica
  auto fluctuations = [&](std::size_t i, std::size_t h, Regime r) {
    std::vector<double> x;
    for (const auto& rep : steps) {
      const auto& row = rep[h];
      x.push_back(rescale(r, sc, row[col.n], row[col.obs + i] / row[col.total], mu_bar[i]));
    }
    return x;
  };

  json tests = json::array();
  auto record = [&](TestOutcome t, const std::string& label) {
    t.name = label;
    tests.push_back(outcome_json(t));
  };

  if (wants("lln")) {
    for (std::size_t i = 0; i < nobs; ++i) {
      std::vector<double> ubar;
      if (!steps.empty()) {
        for (const auto& rep : steps) ubar.push_back(rep.back()[col.obs + i] / rep.back()[col.total]);
      } else {
        for (const auto& rep : times) ubar.push_back(rep.back()[col.obs + i] / rep.back()[col.total]);
      }
      record(lln_check(cfg.observables[i].name, stats::mean(ubar), mu_bar[i], tol.lln_band),
             "lln[" + cfg.observables[i].name + "]");
    }
  }

  const bool critical = regime == Regime::kCritical;
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < nobs; ++i) {
    if (bridge_covariance(kernel, cfg.observables[i].f, cfg.observables[i].f) > 0.0) {
      active.push_back(i);
    } else if (wants("bridge") || wants("covariance")) {
      skipped.push_back({{"observable", cfg.observables[i].name}, {"reason", "zero predicted bridge variance"}});
    }
  }

  if (wants("bridge")) {
    need_steps("bridge");
    if (regime == Regime::kSupercritical) throw ConfigError("bridge tests need rho <= 1/2");
    BridgeTestOptions opt;
    opt.relative_tolerance = critical ? tol.critical_relative : tol.bridge_relative;
    opt.se_multiplier = tol.se_multiplier;
    opt.ks_alpha = tol.ks_alpha;
    const std::size_t h = cfg.horizons.size() - 1;
    for (std::size_t i : active) {
      const auto& f = cfg.observables[i].f;
      const auto x = fluctuations(i, h, regime);
      record(gaussian_bridge_test(x, bridge_covariance(kernel, f, f), opt),
             std::string(critical ? "critical_bridge[" : "gaussian_bridge[") +
                 cfg.observables[i].name + "]");
    }
  }

  if (wants("covariance")) {
    need_steps("covariance");
    if (regime == Regime::kSupercritical) throw ConfigError("covariance tests need rho <= 1/2");
    if (active.size() < 2) throw ConfigError("covariance test needs two observables with nonzero variance");
    const std::size_t h = cfg.horizons.size() - 1;
    std::vector<std::vector<double>> samples;
    std::vector<std::vector<double>> predicted(active.size(), std::vector<double>(active.size()));
    for (std::size_t a = 0; a < active.size(); ++a) {
      samples.push_back(fluctuations(active[a], h, regime));
      for (std::size_t b = 0; b < active.size(); ++b) {
        predicted[a][b] = bridge_covariance(kernel, cfg.observables[active[a]].f, cfg.observables[active[b]].f);
      }
    }
    CovarianceTestOptions opt{critical ? tol.critical_relative : tol.covariance_relative, tol.se_multiplier};
    const auto res = joint_covariance_test(samples, predicted, opt);
    std::size_t k = 0;
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a; b < active.size(); ++b) {
        record(res[k++], "covariance[" + cfg.observables[active[a]].name + "," +
                             cfg.observables[active[b]].name + "]");
      }
    }
  }

  if (wants("functional")) {
    if (times.empty() || !(cfg.time_scale > 0.0)) {
      throw ConfigError("test 'functional' needs times and time_scale");
    }
    std::vector<double> grid;
    for (double t : cfg.times) grid.push_back(t / cfg.time_scale);
    CovarianceTestOptions opt{tol.functional_relative, tol.se_multiplier};
    for (std::size_t i : active) {
      std::vector<std::vector<double>> per_time(cfg.times.size());
      for (std::size_t j = 0; j < cfg.times.size(); ++j) {
        for (const auto& rep : times) {
          const auto& row = rep[j];
          per_time[j].push_back((row[col.obs + i] - mu_bar[i] * row[col.total]) / std::sqrt(cfg.time_scale));
        }
      }
      const auto& f = cfg.observables[i].f;
      const double s2 = sigma_sq(kernel, f.shifted(-mu_bar[i]));
      for (auto& t : functional_t2_test(per_time, grid, s2, sc.rho, opt)) {
        record(t, cfg.observables[i].name + ":" + t.name);
      }
    }
  }

  if (wants("supercritical")) {
    need_steps("supercritical");
    SupercriticalOptions opt;
    opt.min_correlation = tol.min_correlation;
    opt.control_band = tol.control_band;
    for (std::size_t i = 0; i < nobs; ++i) {
      if (degenerate[i]) {
        skipped.push_back({{"observable", cfg.observables[i].name}, {"reason", "mu(|f|) = 0, see degeneracy"}});
        continue;
      }
      std::vector<std::vector<double>> per_horizon;
      for (std::size_t h = 0; h < cfg.horizons.size(); ++h) {
        per_horizon.push_back(fluctuations(i, h, Regime::kSupercritical));
      }
      for (auto& t : supercritical_convergence_diag(per_horizon, opt)) {
        record(t, cfg.observables[i].name + ":" + t.name);
      }
    }
  }

  if (wants("degeneracy")) {
    need_steps("degeneracy");
    for (std::size_t i = 0; i < nobs; ++i) {
      if (!degenerate[i] && cfg.tests.empty()) continue;
      const auto x = fluctuations(i, cfg.horizons.size() - 1, Regime::kSupercritical);
      record(degeneracy_check(x, tol.degenerate_threshold), cfg.observables[i].name + ":degenerate_median");
    }
  }

  if (wants("martingale")) {
    if (times.empty() || cfg.replicas < 2) throw ConfigError("test 'martingale' needs times and two replicas");
    const double m0_a = integrate(cfg.u0, kernel.modulation());
    for (std::size_t j = 0; j < cfg.times.size(); ++j) {
      const std::string at = "@t=" + format_double(cfg.times[j]);
      auto mean_test = [&](const std::string& name, std::size_t c, std::size_t c2, double target) {
        std::vector<double> x;
        for (const auto& rep : times) x.push_back(rep[j][c] - (c2 ? rep[j][c2] : 0.0));
        TestOutcome t;
        t.observed = stats::mean(x);
        t.predicted = target;
        t.standard_error = stats::standard_error_of_mean(x);
        t.tolerance = tol.martingale_se * t.standard_error + 1e-12 * std::max(1.0, std::abs(target));
        t.passed = std::abs(t.observed - target) <= t.tolerance;
        record(t, name + at);
      };
      mean_test("martingale_mean[a]", col.m_a, 0, m0_a);
      for (std::size_t k = 0; k < cfg.trackers.size(); ++k) {
        const auto& f = cfg.observables[cfg.observable_index(cfg.trackers[k])].f;
        const double m0 = integrate(cfg.u0, f.shifted(-mubar(kernel, f)));
        mean_test("martingale_mean[" + cfg.trackers[k] + "]", col.mart + k, 0, m0);
        if (std::isnan(times.front()[j][col.pred + k])) {
          skipped.push_back({{"observable", cfg.trackers[k]}, {"reason", "no predictable bracket"}});
          continue;
        }
        mean_test("bracket_gap[" + cfg.trackers[k] + "]", col.opt + k, col.pred + k, 0.0);
      }
    }
  }

  std::size_t passed = 0;
  for (const auto& t : tests) passed += t["passed"].get<bool>() ? 1 : 0;
  json report{{"schema", kSchema},
              {"kind", "analysis"},
              {"config_sha256", cfg.sha256()},
              {"regime", to_string(regime)},
              {"spectral", spectral_json(sc)},
              {"tests", tests},
              {"skipped", skipped},
              {"passed", passed},
              {"failed", tests.size() - passed},
              {"all_passed", passed == tests.size()}};
  const std::string text = dump_json(report, 2);
  write_text(dir / "report.json", text);
  out << text << '\n';
  return passed == tests.size() ? kExitOk : kExitValidation;
}

}  // namespace

int cmd_validate(const Config& cfg, std::ostream& out, std::ostream& err) {
  return std::visit(
      [&](const auto& kernel) {
        auto report = validate_assumptions(kernel, cfg.validation.samples, cfg.validation.grid,
                                           cfg.validation.z_tolerance, cfg.base_seed);
        using K = std::decay_t<decltype(kernel)>;
        if constexpr (std::is_same_v<K, FiniteKernel>) {
          report.entries.push_back({"exact:constant-copy-mean",
                                    kernel.has_constant_copy_mean() ? CheckStatus::kPass : CheckStatus::kFail,
                                    0, 0, 0, "E_s(C) from the outcome tables"});
          report.entries.push_back({"exact:factorization",
                                    kernel.factorizes() ? CheckStatus::kPass : CheckStatus::kFail, 0, 0,
                                    0, "E_s(xi) proportional to a common measure"});
        }
        json entries = json::array();
        std::size_t failures = 0, indeterminate = 0;
        for (const auto& e : report.entries) {
          failures += e.status == CheckStatus::kFail;
          indeterminate += e.status == CheckStatus::kIndeterminate;
          entries.push_back({{"assumption", e.assumption},
                             {"status", to_string(e.status)},
                             {"statistic", e.statistic},
                             {"tolerance", e.tolerance},
                             {"sample_size", e.sample_size},
                             {"detail", e.detail}});
        }
        json j{{"schema", kSchema},
               {"kind", "validation"},
               {"config_sha256", cfg.sha256()},
               {"kernel", kernel.name()},
               {"entries", entries},
               {"failures", failures},
               {"indeterminate", indeterminate}};
        out << dump_json(j, 2) << '\n';
        if (failures > 0) {
          err << "validation failed: " << failures << " checks\n";
          return kExitValidation;
        }
        if (indeterminate > 0) err << "warning: " << indeterminate << " checks indeterminate\n";
        return kExitOk;
      },
      cfg.kernel);
}

int cmd_simulate(const Config& cfg, unsigned threads, std::ostream& out, std::ostream& err) {
  return std::visit([&](const auto& k) { return simulate_with(cfg, k, threads, out, err); }, cfg.kernel);
}

int cmd_analyze(const Config& cfg, std::ostream& out, std::ostream& err) {
  return std::visit([&](const auto& k) { return analyze_with(cfg, k, out, err); }, cfg.kernel);
}

int cmd_oracle(const Config& cfg, unsigned threads, std::ostream& out, std::ostream& err) {
  const auto* kernel = std::get_if<FiniteKernel>(&cfg.kernel);
  if (!kernel) throw OracleInfeasibleError("oracle requires finite kernel");
  if (cfg.oracle.observable.empty()) throw ConfigError("field 'oracle.observable': no observable configured");
  const auto& f = cfg.observables[cfg.observable_index(cfg.oracle.observable)].f;
  OracleOptions opt;
  opt.node_budget = cfg.oracle.node_budget;
  opt.max_depth = cfg.oracle.max_depth;
  const auto cmp = oracle_vs_montecarlo(*kernel, cfg.u0, cfg.oracle.n, f, cfg.oracle.replicas,
                                        cfg.base_seed, threads, opt);
  json j{{"schema", kSchema},
         {"kind", "oracle"},
         {"config_sha256", cfg.sha256()},
         {"n", cfg.oracle.n},
         {"observable", cfg.oracle.observable},
         {"exact", {{"mean", rational_json(cmp.exact.mean)},
                    {"normalized_mean", rational_json(cmp.exact.normalized_mean)},
                    {"variance", rational_json(cmp.exact.variance)},
                    {"nodes", cmp.exact.nodes}}},
         {"monte_carlo", {{"replicas", cfg.oracle.replicas},
                          {"normalized_mean", cmp.mc_mean},
                          {"standard_error", cmp.mc_standard_error}}},
         {"outcome", outcome_json(cmp.outcome)}};
  out << dump_json(j, 2) << '\n';
  if (!cmp.outcome.passed) err << "oracle and Monte Carlo disagree\n";
  return cmp.outcome.passed ? kExitOk : kExitValidation;
}

int run_command(const std::string& command, const CommandOptions& opt, std::ostream& out,
                std::ostream& err) {
  auto fail = [&](int code, const std::string& msg) {
    err << "urnlab " << command << ": " << msg << '\n';
    return code;
  };
  try {
    Config cfg = load_config(opt.config_path);
    apply_overrides(cfg, opt.seed, opt.replicas);
    if (opt.out) cfg.output_dir = *opt.out;
    const unsigned threads = opt.threads > 0 ? opt.threads : default_threads();
    if (command == "validate") return cmd_validate(cfg, out, err);
    if (command == "simulate") return cmd_simulate(cfg, threads, out, err);
    if (command == "analyze") return cmd_analyze(cfg, out, err);
    if (command == "oracle") return cmd_oracle(cfg, threads, out, err);
    return fail(kExitConfig, "unknown command");
  } catch (const ConfigError& e) {
    return fail(kExitConfig, e.what());
  } catch (const HashMismatchError& e) {
    return fail(kExitHashMismatch, e.what());
  } catch (const OracleInfeasibleError& e) {
    return fail(kExitOracle, e.what());
  } catch (const BudgetExceededError& e) {
    return fail(kExitOracle, e.what());
  } catch (const IntegrityError& e) {
    return fail(kExitIntegrity, e.what());
  } catch (const Error& e) {
    return fail(kExitConfig, e.what());
  } catch (const YAML::Exception& e) {
    return fail(kExitConfig, e.what());
  } catch (const json::exception& e) {
    return fail(kExitIntegrity, e.what());
  } catch (const std::exception& e) {
    return fail(kExitIntegrity, e.what());
  }
}

}  // namespace urnlab::cli
