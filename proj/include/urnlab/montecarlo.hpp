#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "urnlab/engine.hpp"
#include "urnlab/errors.hpp"
#include "urnlab/kernels.hpp"
#include "urnlab/spectral.hpp"
#include "urnlab/stats.hpp"

namespace urnlab {

enum class Regime { kSubcritical, kCritical, kSupercritical };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::kSubcritical:
      return "subcritical";
    case Regime::kCritical:
      return "critical";
    case Regime::kSupercritical:
      return "supercritical";
  }
  return "?";
}

inline Regime classify_regime(const SpectralConstants& sc) {
  if (sc.rho_exact) {
    const Rational half(1, 2);
    if (*sc.rho_exact == half) return Regime::kCritical;
    return *sc.rho_exact > half ? Regime::kSupercritical : Regime::kSubcritical;
  }
  if (std::abs(sc.rho - 0.5) < 1e-12) return Regime::kCritical;
  return sc.rho > 0.5 ? Regime::kSupercritical : Regime::kSubcritical;
}

/// Regime-appropriate rescaling of Ubar_n(f) - mubar(f).
inline double rescale(Regime regime, const SpectralConstants& sc, double n, double ubar_f,
                      double mubar_f) {
  if (n < 2.0) throw ParameterError("rescale needs n >= 2");
  const double d = ubar_f - mubar_f;
  switch (regime) {
    case Regime::kSubcritical:
      return sc.lambda1 * std::sqrt((1.0 - 2.0 * sc.rho) * n) * d;
    case Regime::kCritical:
      return sc.lambda1 * std::sqrt(n / std::log(n)) * d;
    case Regime::kSupercritical:
      return std::pow(n, 1.0 - sc.rho) * d;
  }
  return d;
}

/// Worker count: URNLAB_THREADS if set, else the hardware concurrency.
inline unsigned default_threads() {
  if (const char* env = std::getenv("URNLAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(0..count-1) on a fixed pool. Results come back in index order
/// whatever the completion order; the first exception is rethrown.
template <class F>
auto run_replicas(std::size_t count, unsigned threads, F&& fn) {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<std::optional<R>> slots(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

template <ReplacementKernel K>
struct Campaign {
  K kernel;
  CountingMeasure u0;
  std::vector<NamedFunction> observables;
  std::vector<NamedFunction> centered;
  std::vector<std::uint64_t> horizons;
  std::vector<double> times;
  std::uint32_t replicas = 2;
  std::uint64_t base_seed = 0;
};

struct ReplicaResult {
  Trajectory steps;
  Trajectory times;
};

template <ReplacementKernel K>
void check_campaign(const Campaign<K>& c) {
  if (c.replicas < 2) throw ParameterError("a campaign needs at least two replicas");
  for (std::size_t i = 1; i < c.horizons.size(); ++i) {
    if (!(c.horizons[i] > c.horizons[i - 1])) {
      throw ParameterError("horizons must be strictly increasing");
    }
  }
}

template <ReplacementKernel K>
std::vector<ReplicaResult> simulate_campaign(const Campaign<K>& c, unsigned threads) {
  check_campaign(c);
  EngineOptions options;
  options.observables = c.observables;
  options.centered = c.centered;
  return run_replicas(c.replicas, threads, [&](std::size_t k) {
    Engine<K> engine(c.kernel, c.u0, c.base_seed, static_cast<std::uint32_t>(k), options);
    auto [steps, times] = engine.run(c.horizons, c.times);
    return ReplicaResult{std::move(steps), std::move(times)};
  });
}

/// Per-replica rescaled statistics of one observable at one step checkpoint.
inline std::vector<double> fluctuation_sample(const std::vector<ReplicaResult>& results,
                                              std::size_t checkpoint, std::size_t observable,
                                              Regime regime, const SpectralConstants& sc,
                                              double mubar_f) {
  std::vector<double> out;
  out.reserve(results.size());
  for (const auto& r : results) {
    const auto& cp = r.steps.checkpoints.at(checkpoint);
    const double ubar = cp.observables.at(observable) / static_cast<double>(cp.total);
    out.push_back(rescale(regime, sc, static_cast<double>(cp.n), ubar, mubar_f));
  }
  return out;
}

struct TestOutcome {
  std::string name;
  double observed = 0.0;
  double predicted = 0.0;
  double standard_error = std::numeric_limits<double>::quiet_NaN();
  double p_value = std::numeric_limits<double>::quiet_NaN();
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

/// |observed - predicted| <= max(rel * |predicted|, se_mult * se).
inline double allowed_deviation(double predicted, double rel, double se, double se_mult) {
  return std::max(rel * std::abs(predicted), se_mult * se);
}

struct BridgeTestOptions {
  double relative_tolerance = 0.10;
  double se_multiplier = 4.0;
  double ks_alpha = 0.01;
  std::size_t min_samples = 500;
};

/// Sample variance against the predicted bridge variance, plus a KS test
/// against N(0, predicted).
inline TestOutcome gaussian_bridge_test(std::span<const double> samples, double predicted_var,
                                        const BridgeTestOptions& opt = {}) {
  if (samples.size() < opt.min_samples) {
    throw InsufficientReplicasError("gaussian bridge test needs at least " +
                                    std::to_string(opt.min_samples) + " samples, got " +
                                    std::to_string(samples.size()));
  }
  TestOutcome t;
  t.name = "gaussian_bridge";
  t.observed = stats::variance(samples);
  t.predicted = predicted_var;
  t.standard_error = stats::standard_error_of_variance(samples);
  t.tolerance =
      allowed_deviation(predicted_var, opt.relative_tolerance, t.standard_error, opt.se_multiplier);
  const auto ks = stats::ks_test_normal(samples, predicted_var);
  t.p_value = ks.p_value;
  const bool var_ok = std::abs(t.observed - t.predicted) <= t.tolerance;
  const bool ks_ok = ks.p_value > opt.ks_alpha;
  t.passed = var_ok && ks_ok;
  t.detail = "KS D=" + std::to_string(ks.statistic) + (var_ok ? "" : "; variance off") +
             (ks_ok ? "" : "; KS rejects");
  return t;
}

struct CovarianceTestOptions {
  double relative_tolerance = 0.15;
  double se_multiplier = 4.0;
};

/// Entries (i <= j) of the sample covariance matrix against predictions.
inline std::vector<TestOutcome> joint_covariance_test(
    const std::vector<std::vector<double>>& samples,
    const std::vector<std::vector<double>>& predicted, const CovarianceTestOptions& opt = {}) {
  if (samples.size() < 2) throw ParameterError("joint covariance test needs >= 2 observables");
  std::vector<TestOutcome> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = i; j < samples.size(); ++j) {
      TestOutcome t;
      t.name = "covariance[" + std::to_string(i) + "," + std::to_string(j) + "]";
      t.observed = stats::covariance(samples[i], samples[j]);
      t.predicted = predicted[i][j];
      t.standard_error = stats::standard_error_of_covariance(samples[i], samples[j]);
      t.tolerance = allowed_deviation(t.predicted, opt.relative_tolerance, t.standard_error,
                                      opt.se_multiplier);
      t.passed = std::abs(t.observed - t.predicted) <= t.tolerance;
      out.push_back(std::move(t));
    }
  }
  return out;
}

struct SupercriticalOptions {
  double min_correlation = 0.9;
  double control_band = 0.1;
  std::size_t min_samples = 500;
  std::uint64_t shuffle_seed = 0x5eed;
};

/// per_horizon[h][k]: statistic of replica k at horizon h (geometric grid).
inline std::vector<TestOutcome> supercritical_convergence_diag(
    const std::vector<std::vector<double>>& per_horizon, const SupercriticalOptions& opt = {}) {
  if (per_horizon.size() < 3) throw ParameterError("supercritical diagnostic needs >= 3 horizons");
  if (per_horizon.front().size() < opt.min_samples) {
    throw InsufficientReplicasError("supercritical diagnostic needs at least " +
                                    std::to_string(opt.min_samples) + " replicas");
  }
  const auto& first = per_horizon.front();
  const auto& last = per_horizon.back();
  std::vector<TestOutcome> out;

  TestOutcome corr;
  corr.name = "cross_horizon_correlation";
  corr.observed = stats::pearson(first, last);
  corr.predicted = 1.0;
  corr.tolerance = opt.min_correlation;
  corr.passed = corr.observed > opt.min_correlation;
  out.push_back(corr);

  std::vector<double> shuffled = last;
  PhiloxStream rng(opt.shuffle_seed, 0, 0);
  stats::shuffle(shuffled, rng);
  TestOutcome control;
  control.name = "shuffled_control_correlation";
  control.observed = stats::pearson(first, shuffled);
  control.predicted = 0.0;
  control.tolerance = opt.control_band;
  control.passed = std::abs(control.observed) <= opt.control_band;
  out.push_back(control);

  TestOutcome cauchy;
  cauchy.name = "median_increment_decreasing";
  std::vector<double> medians;
  for (std::size_t h = 0; h + 1 < per_horizon.size(); ++h) {
    std::vector<double> d(first.size());
    for (std::size_t k = 0; k < d.size(); ++k) {
      d[k] = std::abs(per_horizon[h + 1][k] - per_horizon[h][k]);
    }
    medians.push_back(stats::median(std::move(d)));
  }
  cauchy.passed = true;
  for (std::size_t i = 0; i + 1 < medians.size(); ++i) {
    if (!(medians[i + 1] < medians[i])) cauchy.passed = false;
  }
  cauchy.observed = medians.back();
  cauchy.predicted = 0.0;
  cauchy.detail = "medians:";
  for (double m : medians) cauchy.detail += " " + std::to_string(m);
  out.push_back(cauchy);
  return out;
}

/// Degenerate case mu(|f|) = 0: the statistic must vanish.
inline TestOutcome degeneracy_check(std::span<const double> stat_at_largest, double threshold = 0.05) {
  TestOutcome t;
  t.name = "degenerate_median";
  std::vector<double> a(stat_at_largest.begin(), stat_at_largest.end());
  for (auto& v : a) v = std::abs(v);
  t.observed = stats::median(std::move(a));
  t.predicted = 0.0;
  t.tolerance = threshold;
  t.passed = t.observed < threshold;
  return t;
}

/// Covariance of the limit of X_{tn}(f)/sqrt(n) at times s and t.
inline double t2_covariance(double sigma2, double rho, double s, double t) {
  return sigma2 / (1.0 - 2.0 * rho) * std::pow(s * t, rho) * std::pow(std::min(s, t), 1.0 - 2.0 * rho);
}

/// per_time[i][k]: X_{t_i n}(f) / sqrt(n) for replica k.
inline std::vector<TestOutcome> functional_t2_test(const std::vector<std::vector<double>>& per_time,
                                                   const std::vector<double>& grid, double sigma2,
                                                   double rho, const CovarianceTestOptions& opt = {}) {
  if (!(rho < 0.5)) throw ParameterError("functional test applies to the subcritical regime");
  std::vector<TestOutcome> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i; j < grid.size(); ++j) {
      TestOutcome t;
      t.name = "t2_cov(" + std::to_string(grid[i]) + "," + std::to_string(grid[j]) + ")";
      t.observed = stats::covariance(per_time[i], per_time[j]);
      t.predicted = t2_covariance(sigma2, rho, grid[i], grid[j]);
      t.standard_error = stats::standard_error_of_covariance(per_time[i], per_time[j]);
      t.tolerance = allowed_deviation(t.predicted, opt.relative_tolerance, t.standard_error,
                                      opt.se_multiplier);
      t.passed = std::abs(t.observed - t.predicted) <= t.tolerance;
      out.push_back(std::move(t));
    }
  }
  return out;
}

inline TestOutcome lln_check(const std::string& name, double ubar_f, double mubar_f, double band) {
  TestOutcome t;
  t.name = "lln[" + name + "]";
  t.observed = ubar_f;
  t.predicted = mubar_f;
  t.tolerance = band;
  t.passed = std::abs(ubar_f - mubar_f) < band;
  return t;
}

}  // namespace urnlab
