#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "urnlab/errors.hpp"
#include "urnlab/kernels.hpp"
#include "urnlab/measures.hpp"
#include "urnlab/rng.hpp"
#include "urnlab/sampler.hpp"
#include "urnlab/spectral.hpp"
#include "urnlab/test_function.hpp"

namespace urnlab {

struct ClockState {
  double t = 0.0;
  std::uint64_t n = 0;
  double phi = 0.0;
};

struct NamedFunction {
  std::string name;
  TestFunction f;
};

struct EngineOptions {
  std::vector<NamedFunction> observables;
  /// Functions with mu(f) = 0; each gets a martingale tracker discounted by lambda2.
  std::vector<NamedFunction> centered;
  /// Relative tolerance of the mu(f) = 0 check, scaled by sup|f| * mu(1).
  double centering_tolerance = 1e-12;
  /// Compaction runs once zero slots exceed half the slots and this floor.
  std::size_t compaction_floor = 64;
};

enum class TrackerKind { kModulation, kCentered };

/// M_t(f) = X_t(f) exp(-lambda Phi(t)) with its optional and predictable brackets.
class MartingaleTracker {
 public:
  MartingaleTracker(std::string name, TrackerKind kind, TestFunction f, double lambda,
                    std::optional<SecondMomentFn> q)
      : name_(std::move(name)), kind_(kind), f_(std::move(f)), lambda_(lambda),
        q_(std::move(q)) {}

  const std::string& name() const { return name_; }
  TrackerKind kind() const { return kind_; }
  const TestFunction& function() const { return f_; }
  double lambda() const { return lambda_; }
  bool has_predictable_bracket() const { return q_.has_value(); }

  double x() const { return x_.value(); }
  double value(double phi) const { return x() * std::exp(-lambda_ * phi); }
  double optional_bracket() const { return optional_.value(); }
  double predictable_bracket() const {
    return q_ ? predictable_.value() : std::numeric_limits<double>::quiet_NaN();
  }
  /// Running sum of multiplicity * E_s((f(s)C + xi(f))^2) over atoms.
  double q_sum() const { return q_sum_.value(); }

  double f_at(const Color& c) const { return f_(c); }
  double q_at(const Color& c, double fc) const { return q_ ? (*q_)(c, fc) : 0.0; }

  void reset(double x0, double q0) {
    x_ = {};
    x_.add(x0);
    q_sum_ = {};
    q_sum_.add(q0);
    optional_ = {};
    predictable_ = {};
  }

  /// Segment of length dt with the urn frozen at total m, starting at phi0.
  void integrate_segment(double phi0, double dt, double m) {
    if (!q_ || dt == 0.0) return;
    const double q = q_sum_.value() / m;
    if (lambda_ == 0.0) {
      predictable_.add(q * dt);
    } else {
      const double two_l = 2.0 * lambda_;
      predictable_.add(q * (m / two_l) * std::exp(-two_l * phi0) * -std::expm1(-two_l * dt / m));
    }
  }

  void jump(double dx, double dq, double phi) {
    x_.add(dx);
    q_sum_.add(dq);
    const double dm = dx * std::exp(-lambda_ * phi);
    optional_.add(dm * dm);
  }

 private:
  std::string name_;
  TrackerKind kind_;
  TestFunction f_;
  double lambda_;
  std::optional<SecondMomentFn> q_;
  CompensatedSum x_;
  CompensatedSum q_sum_;
  CompensatedSum optional_;
  CompensatedSum predictable_;
};

struct Checkpoint {
  double t = 0.0;
  std::uint64_t n = 0;
  std::uint64_t total = 0;
  double phi = 0.0;
  std::vector<double> observables;
  double m_a = 0.0;
  std::vector<double> martingales;
  std::vector<double> optional_brackets;
  std::vector<double> predictable_brackets;
};

struct Trajectory {
  std::vector<Checkpoint> checkpoints;
};

/// Growth diagnostic: X_t(1)/t against the kernel's declared mean growth.
struct GrowthDiagnostic {
  double ratio = 0.0;
  double gamma = 0.0;
  bool flagged = false;
};

/// One replica of the Poisson-subordinated urn.
template <ReplacementKernel K, UniformSource Rng = PhiloxStream>
class Engine {
 public:
  Engine(K kernel, const CountingMeasure& u0, Rng holding, Rng color, Rng kernel_rng,
         EngineOptions options = {})
      : kernel_(std::move(kernel)), options_(std::move(options)),
        constants_(spectral_constants(kernel_)), holding_(std::move(holding)),
        color_(std::move(color)), kernel_rng_(std::move(kernel_rng)) {
    init(u0);
  }

  Engine(K kernel, const CountingMeasure& u0, std::uint64_t seed, std::uint32_t replica,
         EngineOptions options = {})
    requires std::same_as<Rng, PhiloxStream>
      : Engine(std::move(kernel), u0, PhiloxStream(seed, replica, Substream::kHolding),
               PhiloxStream(seed, replica, Substream::kColor),
               PhiloxStream(seed, replica, Substream::kKernel), std::move(options)) {}

  const K& kernel() const { return kernel_; }
  const SpectralConstants& constants() const { return constants_; }
  const CountingMeasure& urn() const { return urn_; }
  const UrnSampler& sampler() const { return sampler_; }
  const ClockState& clock() const { return clock_; }
  const EngineOptions& options() const { return options_; }
  double next_jump_time() const { return next_jump_; }

  const MartingaleTracker& modulation_tracker() const { return trackers_.front(); }
  /// Centered trackers, in option order.
  std::span<const MartingaleTracker> centered_trackers() const {
    return std::span(trackers_).subspan(1);
  }

  double observable(std::size_t i) const { return observables_[i].value(); }

  /// Q(X, f) = int Xbar(ds) E_s((f(s)C + xi(f))^2), from scratch.
  double q_form(const TestFunction& f) const {
    const auto q = kernel_.second_moment_form(f);
    if (!q) {
      throw InexactIntegralError(kernel_.name() + ": no closed-form second moments");
    }
    CompensatedSum acc;
    urn_.for_each_atom([&](const Color& c, std::uint64_t m) {
      acc.add(static_cast<double>(m) * (*q)(c, f(c)));
    });
    return acc.value() / static_cast<double>(urn_.total());
  }

  /// One jump of the chain.
  void step() {
    jump();
    settle();
  }

  void advance_steps(std::uint64_t n) {
    for (std::uint64_t i = 0; i < n; ++i) jump();
    settle();
  }

  /// Runs every jump with time <= T, then moves the clock to exactly T.
  void advance_to(double T) {
    if (T < clock_.t) throw ParameterError("cannot advance backwards in time");
    while (next_jump_ <= T) jump();
    settle();
    integrate_to(T);
  }

  Checkpoint checkpoint() const {
    Checkpoint cp;
    cp.t = clock_.t;
    cp.n = clock_.n;
    cp.total = urn_.total();
    cp.phi = clock_.phi;
    for (const auto& o : observables_) cp.observables.push_back(o.value());
    cp.m_a = trackers_.front().value(clock_.phi);
    for (const auto& tr : centered_trackers()) {
      cp.martingales.push_back(tr.value(clock_.phi));
      cp.optional_brackets.push_back(tr.optional_bracket());
      cp.predictable_brackets.push_back(tr.predictable_bracket());
    }
    return cp;
  }

  /// Checkpoints at step counts and at continuous times, both strictly
  /// increasing and not behind the current clock. A time checkpoint sees
  /// every jump at or before it.
  std::pair<Trajectory, Trajectory> run(const std::vector<std::uint64_t>& steps,
                                        const std::vector<double>& times) {
    check_grid(steps, clock_.n);
    check_grid(times, clock_.t);
    std::pair<Trajectory, Trajectory> out;
    std::size_t i = 0, j = 0;
    for (;;) {
      if (i < steps.size() && steps[i] == clock_.n) {
        settle();
        out.first.checkpoints.push_back(checkpoint());
        ++i;
        continue;
      }
      if (j < times.size() && times[j] < next_jump_) {
        settle();
        integrate_to(times[j]);
        out.second.checkpoints.push_back(checkpoint());
        ++j;
        continue;
      }
      if (i == steps.size() && j == times.size()) break;
      jump();
    }
    return out;
  }

  Trajectory run_steps(const std::vector<std::uint64_t>& steps) { return run(steps, {}).first; }
  Trajectory run_times(const std::vector<double>& times) { return run({}, times).second; }

  /// Recomputes X_t(f) for tracker i (0 = modulation) from the urn.
  double tracker_x_from_scratch(std::size_t i) const {
    return integrate(urn_, trackers_[i].function());
  }

  GrowthDiagnostic growth() const {
    GrowthDiagnostic g;
    g.gamma = kernel_.mean_total_replacement();
    g.ratio = clock_.t > 0.0 ? static_cast<double>(urn_.total()) / clock_.t : 0.0;
    g.flagged = clock_.t >= 1e3 && g.ratio > g.gamma;
    return g;
  }

 private:
  void init(const CountingMeasure& u0) {
    if (u0.total() == 0) throw EmptyMeasureError("initial urn must contain at least one ball");
    const ColorSpace space = kernel_.space();
    u0.for_each_atom([&](const Color& c, std::uint64_t m) {
      if (!space.contains(c)) {
        throw ColorSpaceError("initial color " + c.to_string() + " outside the kernel space");
      }
      urn_.add(c, m);
    });
    sampler_.rebuild(urn_.multiplicities());
    defer_index_ = space.kind == ColorSpace::Kind::kContinuum;

    trackers_.emplace_back("a", TrackerKind::kModulation, kernel_.modulation(),
                           constants_.lambda1, kernel_.second_moment_form(kernel_.modulation()));
    const double mu_one = kernel_.intensity().total_mass();
    for (const auto& nf : options_.centered) {
      const double mu_f = measure_integrate(kernel_.intensity(), nf.f);
      const double bound = nf.f.sup_bound();
      if (std::abs(mu_f) > options_.centering_tolerance * std::max(bound, 1.0) * mu_one) {
        throw ParameterError("centered tracker '" + nf.name + "' needs mu(f) = 0, got " +
                             std::to_string(mu_f));
      }
      trackers_.emplace_back(nf.name, TrackerKind::kCentered, nf.f, constants_.lambda2,
                             kernel_.second_moment_form(nf.f));
    }
    for (auto& tr : trackers_) {
      double x0 = 0.0, q0 = 0.0;
      urn_.for_each_atom([&](const Color& c, std::uint64_t m) {
        const double fc = tr.f_at(c);
        x0 += static_cast<double>(m) * fc;
        q0 += static_cast<double>(m) * tr.q_at(c, fc);
      });
      tr.reset(x0, q0);
    }
    observables_.resize(options_.observables.size());
    for (std::size_t i = 0; i < observables_.size(); ++i) {
      observables_[i].add(integrate(urn_, options_.observables[i].f));
    }
    next_jump_ = holding_.exponential();
  }

  void jump() {
    integrate_to(next_jump_);
    const Color* colors = urn_.colors().data();
    std::size_t slot =
        sampler_.sample(color_, urn_.multiplicities(), [colors](std::size_t first, std::size_t last) {
          const char* lo = reinterpret_cast<const char*>(colors + first);
          const char* hi = reinterpret_cast<const char*>(colors + last);
          for (; lo < hi; lo += 64) __builtin_prefetch(lo);
        });
    const Color s = urn_.color(slot);
    const Replacement r = kernel_.sample(s, kernel_rng_);
    for (const auto& x : r.innovation) urn_.prefetch(x);
    // Slots appended by the previous jump are indexed now that their hash
    // buckets have had a step to arrive in cache.
    urn_.settle([&](std::uint32_t from, std::uint32_t to, std::uint64_t k) {
      sampler_.subtract(from, k);
      sampler_.add(to, k);
      if (slot == from) slot = to;
    });
    apply(slot, s, r);
    ++clock_.n;
    next_jump_ = clock_.t + holding_.exponential();
    maybe_compact();
  }

  void settle() {
    urn_.settle([&](std::uint32_t from, std::uint32_t to, std::uint64_t k) {
      sampler_.subtract(from, k);
      sampler_.add(to, k);
    });
  }

  template <class T>
  static void check_grid(const std::vector<T>& grid, T from) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (grid[k] < from || (k > 0 && !(grid[k] > grid[k - 1]))) {
        throw ParameterError("checkpoint grid must be strictly increasing from the current clock");
      }
    }
  }

  void integrate_to(double t) {
    const double dt = t - clock_.t;
    const double m = static_cast<double>(urn_.total());
    for (auto& tr : trackers_) tr.integrate_segment(clock_.phi, dt, m);
    clock_.phi += dt / m;
    clock_.t = t;
  }

  void apply(std::size_t slot, const Color& s, const Replacement& r) {
    if (r.copies < -1) throw IntegrityError("replacement removed more than one ball");
    if (r.copies + static_cast<std::int64_t>(r.innovation.size()) < 0) {
      throw IntegrityError("replacement would shrink the urn");
    }
    const double c = static_cast<double>(r.copies);
    for (auto& tr : trackers_) {
      const double fs = tr.f_at(s);
      double dx = c * fs;
      double dq = c * tr.q_at(s, fs);
      for (const auto& x : r.innovation) {
        const double fx = tr.f_at(x);
        dx += fx;
        dq += tr.q_at(x, fx);
      }
      tr.jump(dx, dq, clock_.phi);
    }
    for (std::size_t i = 0; i < observables_.size(); ++i) {
      const auto& f = options_.observables[i].f;
      double dx = c * f(s);
      for (const auto& x : r.innovation) dx += f(x);
      observables_[i].add(dx);
    }

    if (r.copies > 0) {
      urn_.add_at(slot, static_cast<std::uint64_t>(r.copies));
      sampler_.add(slot, static_cast<std::uint64_t>(r.copies));
    } else if (r.copies == -1) {
      urn_.remove_at(slot, 1);
      sampler_.subtract(slot, 1);
    }
    for (const auto& x : r.innovation) {
      if (defer_index_) {
        urn_.append_unindexed(x, 1);
        sampler_.push_back(1);
        continue;
      }
      const auto [where, created] = urn_.add(x, 1);
      if (created) {
        sampler_.push_back(1);
      } else {
        sampler_.add(where, 1);
      }
    }
  }

  void maybe_compact() {
    const std::size_t slots = urn_.slot_count();
    if (slots >= options_.compaction_floor && urn_.zero_slots() * 2 > slots) {
      settle();
      urn_.compact();
      sampler_.rebuild(urn_.multiplicities());
    }
  }

  K kernel_;
  EngineOptions options_;
  SpectralConstants constants_;
  Rng holding_;
  Rng color_;
  Rng kernel_rng_;
  CountingMeasure urn_;
  UrnSampler sampler_;
  ClockState clock_;
  double next_jump_ = 0.0;
  // Continuum innovations are almost surely new colors: append first, index
  // one jump later.
  bool defer_index_ = false;
  std::vector<MartingaleTracker> trackers_;
  std::vector<CompensatedSum> observables_;
};

}  // namespace urnlab
