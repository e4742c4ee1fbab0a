#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "urnlab/color.hpp"
#include "urnlab/errors.hpp"
#include "urnlab/measures.hpp"
#include "urnlab/rational.hpp"
#include "urnlab/rng.hpp"
#include "urnlab/test_function.hpp"

namespace urnlab {

/// One draw (C, xi) from P_s: `copies` extra balls of the sampled color
/// (-1 removes it) and the innovation atoms, repeats allowed.
struct Replacement {
  std::int64_t copies = 0;
  boost::container::small_vector<Color, 4> innovation;

  std::int64_t added() const {
    return copies + static_cast<std::int64_t>(innovation.size());
  }
};

/// s, f(s) -> E_s((f(s) C + xi(f))^2).
using SecondMomentFn = std::function<double(const Color&, double)>;

// clang-format off
template <class K>
concept ReplacementKernel = requires(const K& k, const Color& s, PhiloxStream& rng,
                                     const TestFunction& f) {
  { k.name() } -> std::convertible_to<std::string>;
  { k.space() } -> std::convertible_to<ColorSpace>;
  { k.sample(s, rng) } -> std::same_as<Replacement>;
  { k.lambda2() } -> std::convertible_to<double>;
  { k.modulation() } -> std::convertible_to<const TestFunction&>;
  { k.modulation_bounds() } -> std::convertible_to<std::pair<double, double>>;
  { k.intensity() } -> std::convertible_to<const FiniteMeasure&>;
  { k.alpha_moment() } -> std::convertible_to<std::optional<double>>;
  { k.mean_total_replacement() } -> std::convertible_to<double>;
  { k.second_moment_form(f) } -> std::convertible_to<std::optional<SecondMomentFn>>;
  { k.closed_form_cov(f, f) } -> std::convertible_to<std::optional<double>>;
};
// clang-format on

/// Simon's model on S = [0,1]: C ~ Bernoulli(p), xi = (1 - C) delta_V with V
/// uniform. mu = (1-p) Lebesgue, a = 1, lambda2 = p.
class SimonKernel {
 public:
  explicit SimonKernel(double p)
      : p_(checked(p)), intensity_(FiniteMeasure::lebesgue(1.0 - p_)) {}

  std::string name() const { return "simon"; }
  double p() const { return p_; }
  ColorSpace space() const { return ColorSpace::continuum(); }

  template <UniformSource Rng>
  Replacement sample(const Color& s, Rng& rng) const {
    if (!s.is_point()) throw ColorSpaceError("simon kernel needs a color in [0,1]");
    Replacement r;
    if (rng.uniform() < p_) {
      r.copies = 1;
    } else {
      r.innovation.push_back(Color::point(rng.uniform()));
    }
    return r;
  }

  double lambda2() const { return p_; }
  const TestFunction& modulation() const { return modulation_; }
  std::pair<double, double> modulation_bounds() const { return {1.0, 1.0}; }
  const FiniteMeasure& intensity() const { return intensity_; }
  // C + xi(1) == 1, every moment is finite.
  std::optional<double> alpha_moment() const { return 4.0; }
  double mean_total_replacement() const { return 1.0; }

  std::optional<SecondMomentFn> second_moment_form(const TestFunction& f) const {
    const auto f2 = lebesgue_integral(f * f);
    if (!f2) return std::nullopt;
    const double p = p_;
    const double innovation_part = (1.0 - p) * *f2;
    return SecondMomentFn([p, innovation_part](const Color&, double fs) {
      return p * fs * fs + innovation_part;
    });
  }

  /// p * mubar(fg) + (1-p) * int fg, which is int fg since mubar is Lebesgue.
  std::optional<double> closed_form_cov(const TestFunction& f,
                                        const TestFunction& g) const {
    const auto fg = lebesgue_integral(f * g);
    if (!fg) return std::nullopt;
    return p_ * *fg + (1.0 - p_) * *fg;
  }

 private:
  static double checked(double p) {
    if (!(p > 0.0 && p < 1.0)) {
      throw ParameterError("simon kernel needs 0 < p < 1, got " + std::to_string(p));
    }
    return p;
  }

  static std::optional<double> lebesgue_integral(const TestFunction& f) {
    if (const auto* c = f.as_constant()) return c->value;
    if (const auto* pp = f.as_piecewise()) return pp->integral();
    return std::nullopt;
  }

  double p_;
  TestFunction modulation_ = TestFunction::one();
  FiniteMeasure intensity_;
};

/// One row of a finite kernel's outcome table.
struct FiniteOutcome {
  std::int64_t copies = 0;
  std::vector<std::uint32_t> balls;  // innovation tags, repeats allowed
  Rational probability;
};

/// Kernel on S = {1..d} given by exact per-color outcome tables.
///
/// Metadata is computed exactly from the tables: lambda2 = E_ref(C) and
/// mu = intensity of xi under the reference color (the first color with any
/// innovation), a(s) = E_s(xi(1)) / mu(1). `builtin` additionally refuses
/// tables that violate the constant-mean or factorization hypotheses;
/// `from_table` accepts them so that the validator can flag them.
class FiniteKernel {
 public:
  using InnovationLaw = std::vector<std::pair<std::vector<std::uint32_t>, Rational>>;

  /// Independent copy law (same for every color) and innovation law, either
  /// one shared law or one per color.
  static FiniteKernel builtin(std::uint32_t d,
                              const std::vector<std::pair<std::int64_t, Rational>>& copy_law,
                              const std::vector<InnovationLaw>& innovation_law) {
    if (d < 1) throw ParameterError("finite kernel needs d >= 1");
    if (innovation_law.size() != 1 && innovation_law.size() != d) {
      throw ParameterError("innovation law must be shared or given per color");
    }
    std::vector<std::vector<FiniteOutcome>> table(d);
    for (std::uint32_t s = 0; s < d; ++s) {
      const auto& law = innovation_law[innovation_law.size() == 1 ? 0 : s];
      for (const auto& [c, pc] : copy_law) {
        for (const auto& [balls, pb] : law) {
          table[s].push_back({c, balls, pc * pb});
        }
      }
    }
    FiniteKernel k(d, std::move(table), std::nullopt, "finite");
    if (!k.has_constant_copy_mean()) {
      throw FactorizationError("copy law mean differs across colors");
    }
    if (!k.factorizes()) {
      throw FactorizationError(
          "innovation intensities are not proportional to a common measure");
    }
    if (k.modulation_bounds().first <= 0.0) {
      throw FactorizationError("modulation a must be bounded away from 0");
    }
    return k;
  }

  static FiniteKernel from_table(std::uint32_t d,
                                 std::vector<std::vector<FiniteOutcome>> table,
                                 std::optional<Rational> declared_lambda2 = std::nullopt) {
    return FiniteKernel(d, std::move(table), std::move(declared_lambda2), "custom-table");
  }

  std::string name() const { return name_; }
  std::uint32_t colors() const { return d_; }
  ColorSpace space() const { return ColorSpace::finite(d_); }
  const std::vector<FiniteOutcome>& outcomes(std::uint32_t tag) const {
    return table_[tag - 1];
  }

  template <UniformSource Rng>
  Replacement sample(const Color& s, Rng& rng) const {
    if (!space().contains(s)) {
      throw ColorSpaceError("color " + s.to_string() + " is outside {1.." +
                            std::to_string(d_) + "}");
    }
    const std::uint32_t row = s.tag_index() - 1;
    const auto& cum = cumulative_[row];
    const double u = rng.uniform();
    std::size_t i = 0;
    while (i + 1 < cum.size() && u >= cum[i]) ++i;
    const auto& o = table_[row][i];
    Replacement r;
    r.copies = o.copies;
    for (auto b : o.balls) r.innovation.push_back(Color::tag(b));
    return r;
  }

  double lambda2() const { return to_double(lambda2_); }
  const Rational& lambda2_exact() const { return lambda2_; }
  const std::vector<Rational>& mu_exact() const { return mu_; }
  const std::vector<Rational>& modulation_exact() const { return a_; }
  const TestFunction& modulation() const { return modulation_; }
  std::pair<double, double> modulation_bounds() const {
    const auto [lo, hi] = std::minmax_element(a_.begin(), a_.end());
    return {to_double(*lo), to_double(*hi)};
  }
  const FiniteMeasure& intensity() const { return intensity_; }
  std::optional<double> alpha_moment() const { return 4.0; }

  double mean_total_replacement() const {
    Rational best = 0;
    for (const auto& row : table_) {
      Rational m = 0;
      for (const auto& o : row) {
        m += o.probability * (o.copies + static_cast<std::int64_t>(o.balls.size()));
      }
      best = std::max(best, m);
    }
    return to_double(best);
  }

  /// E_s(C) for each color, exactly.
  std::vector<Rational> copy_means() const {
    std::vector<Rational> out;
    for (const auto& row : table_) {
      Rational m = 0;
      for (const auto& o : row) m += o.probability * o.copies;
      out.push_back(m);
    }
    return out;
  }

  /// E_s(xi(1_t)) as a d x d matrix (row s, column t).
  std::vector<std::vector<Rational>> innovation_intensities() const {
    std::vector<std::vector<Rational>> v(d_, std::vector<Rational>(d_, 0));
    for (std::uint32_t s = 0; s < d_; ++s) {
      for (const auto& o : table_[s]) {
        for (auto b : o.balls) v[s][b - 1] += o.probability;
      }
    }
    return v;
  }

  bool has_constant_copy_mean() const {
    const auto m = copy_means();
    return std::all_of(m.begin(), m.end(), [&](const Rational& x) { return x == m[0]; });
  }

  bool factorizes() const {
    const auto v = innovation_intensities();
    for (std::uint32_t s = 0; s < d_; ++s) {
      for (std::uint32_t t = 0; t < d_; ++t) {
        if (v[s][t] != a_[s] * mu_[t]) return false;
      }
    }
    return true;
  }

  std::optional<SecondMomentFn> second_moment_form(const TestFunction& f) const {
    std::vector<double> q(d_, 0.0);
    for (std::uint32_t s = 0; s < d_; ++s) {
      const double fs = f(Color::tag(s + 1));
      CompensatedSum acc;
      for (const auto& o : table_[s]) {
        double x = fs * static_cast<double>(o.copies);
        for (auto b : o.balls) x += f(Color::tag(b));
        acc.add(to_double(o.probability) * x * x);
      }
      q[s] = acc.value();
    }
    return SecondMomentFn([q = std::move(q)](const Color& s, double) {
      return q[s.tag_index() - 1];
    });
  }

  /// sum_s mubar(s) [ mubar(fg) E_s(C^2) + E_s(xi(f) xi(g)) ].
  std::optional<double> closed_form_cov(const TestFunction& f,
                                        const TestFunction& g) const {
    const Rational mass = mu_total();
    double mubar_fg = 0.0;
    for (std::uint32_t t = 0; t < d_; ++t) {
      const Color c = Color::tag(t + 1);
      mubar_fg += to_double(mu_[t] / mass) * f(c) * g(c);
    }
    CompensatedSum acc;
    for (std::uint32_t s = 0; s < d_; ++s) {
      if (mu_[s] == 0) continue;
      const double w = to_double(mu_[s] / mass);
      for (const auto& o : table_[s]) {
        double xf = 0.0, xg = 0.0;
        for (auto b : o.balls) {
          xf += f(Color::tag(b));
          xg += g(Color::tag(b));
        }
        const double c = static_cast<double>(o.copies);
        acc.add(w * to_double(o.probability) * (mubar_fg * c * c + xf * xg));
      }
    }
    return acc.value();
  }

  Rational mu_total() const {
    Rational m = 0;
    for (const auto& x : mu_) m += x;
    return m;
  }

 private:
  FiniteKernel(std::uint32_t d, std::vector<std::vector<FiniteOutcome>> table,
               std::optional<Rational> declared_lambda2, std::string name)
      : d_(d), table_(std::move(table)), name_(std::move(name)) {
    if (d_ < 1) throw ParameterError("finite kernel needs d >= 1");
    if (table_.size() != d_) throw ParameterError("need one outcome table per color");
    for (std::uint32_t s = 0; s < d_; ++s) {
      auto& row = table_[s];
      std::erase_if(row, [](const FiniteOutcome& o) { return o.probability == 0; });
      Rational total = 0;
      for (const auto& o : row) {
        if (o.probability < 0) throw ParameterError("negative outcome probability");
        if (o.copies < -1) throw ParameterError("copies must be >= -1");
        if (o.copies + static_cast<std::int64_t>(o.balls.size()) < 0) {
          throw ParameterError("outcome would empty the urn (C + xi(1) < 0)");
        }
        for (auto b : o.balls) {
          if (b < 1 || b > d_) throw ColorSpaceError("innovation tag outside {1..d}");
        }
        total += o.probability;
      }
      if (total != 1) {
        throw ParameterError("outcome probabilities of color " + std::to_string(s + 1) +
                             " sum to " + to_string(total) + ", not 1");
      }
      std::vector<double> cum;
      Rational acc = 0;
      for (const auto& o : row) {
        acc += o.probability;
        cum.push_back(to_double(acc));
      }
      cumulative_.push_back(std::move(cum));
    }

    const auto v = innovation_intensities();
    std::optional<std::uint32_t> ref;
    for (std::uint32_t s = 0; s < d_ && !ref; ++s) {
      for (const auto& x : v[s]) {
        if (x != 0) {
          ref = s;
          break;
        }
      }
    }
    if (!ref) throw FactorizationError("kernel never innovates (mu would be 0)");
    mu_ = v[*ref];
    const Rational mass = mu_total();
    for (std::uint32_t s = 0; s < d_; ++s) {
      Rational row = 0;
      for (const auto& x : v[s]) row += x;
      a_.push_back(row / mass);
    }
    lambda2_ = declared_lambda2 ? *declared_lambda2 : copy_means()[*ref];

    TagTable a_table;
    std::vector<WeightedAtom> atoms;
    for (std::uint32_t t = 0; t < d_; ++t) {
      a_table.values.push_back(to_double(a_[t]));
      atoms.push_back({Color::tag(t + 1), to_double(mu_[t])});
    }
    modulation_ = TestFunction(std::move(a_table));
    intensity_ = FiniteMeasure::atomic(std::move(atoms));
  }

  std::uint32_t d_;
  std::vector<std::vector<FiniteOutcome>> table_;
  std::vector<std::vector<double>> cumulative_;
  std::string name_;
  Rational lambda2_;
  std::vector<Rational> mu_;
  std::vector<Rational> a_;
  TestFunction modulation_;
  FiniteMeasure intensity_ = FiniteMeasure::lebesgue();
};

/// Kernel given by an arbitrary sampler plus declared metadata. The sampler
/// receives a callable returning uniforms on [0,1).
struct FunctionKernel {
  using Sampler = std::function<Replacement(const Color&, const std::function<double()>&)>;

  std::string label = "custom";
  ColorSpace color_space = ColorSpace::continuum();
  Sampler sampler;
  double declared_lambda2 = 0.0;
  TestFunction declared_modulation = TestFunction::one();
  std::pair<double, double> declared_modulation_bounds{1.0, 1.0};
  FiniteMeasure declared_intensity = FiniteMeasure::lebesgue();
  std::optional<double> declared_alpha;
  double declared_gamma = 1.0;
  std::function<std::optional<SecondMomentFn>(const TestFunction&)> second_moments;
  std::function<std::optional<double>(const TestFunction&, const TestFunction&)> covariance;

  std::string name() const { return label; }
  ColorSpace space() const { return color_space; }

  template <UniformSource Rng>
  Replacement sample(const Color& s, Rng& rng) const {
    if (!color_space.contains(s)) throw ColorSpaceError("color outside kernel space");
    return sampler(s, [&rng] { return rng.uniform(); });
  }

  double lambda2() const { return declared_lambda2; }
  const TestFunction& modulation() const { return declared_modulation; }
  std::pair<double, double> modulation_bounds() const { return declared_modulation_bounds; }
  const FiniteMeasure& intensity() const { return declared_intensity; }
  std::optional<double> alpha_moment() const { return declared_alpha; }
  double mean_total_replacement() const { return declared_gamma; }
  std::optional<SecondMomentFn> second_moment_form(const TestFunction& f) const {
    return second_moments ? second_moments(f) : std::nullopt;
  }
  std::optional<double> closed_form_cov(const TestFunction& f, const TestFunction& g) const {
    return covariance ? covariance(f, g) : std::nullopt;
  }
};

static_assert(ReplacementKernel<SimonKernel>);
static_assert(ReplacementKernel<FiniteKernel>);
static_assert(ReplacementKernel<FunctionKernel>);

using AnyKernel = std::variant<SimonKernel, FiniteKernel, FunctionKernel>;

inline SimonKernel builtin_simon(double p) { return SimonKernel(p); }

inline FiniteKernel builtin_finite(
    std::uint32_t d, const std::vector<std::pair<std::int64_t, Rational>>& copy_law,
    const std::vector<FiniteKernel::InnovationLaw>& innovation_law) {
  return FiniteKernel::builtin(d, copy_law, innovation_law);
}

template <ReplacementKernel K, UniformSource Rng>
Replacement sample_replacement(const K& kernel, const Color& s, Rng& rng) {
  return kernel.sample(s, rng);
}

// ---------------------------------------------------------------------------
// Assumption validation

enum class CheckStatus { kPass, kFail, kIndeterminate };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass:
      return "pass";
    case CheckStatus::kFail:
      return "fail";
    case CheckStatus::kIndeterminate:
      return "indeterminate";
  }
  return "?";
}

struct ValidationEntry {
  std::string assumption;
  CheckStatus status = CheckStatus::kPass;
  double statistic = 0.0;
  double tolerance = 0.0;
  std::size_t sample_size = 0;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationEntry> entries;

  bool any_failure() const {
    return std::any_of(entries.begin(), entries.end(),
                       [](const auto& e) { return e.status == CheckStatus::kFail; });
  }
  bool any_indeterminate() const {
    return std::any_of(entries.begin(), entries.end(), [](const auto& e) {
      return e.status == CheckStatus::kIndeterminate;
    });
  }
  const ValidationEntry* find(const std::string& id) const {
    for (const auto& e : entries) {
      if (e.assumption == id) return &e;
    }
    return nullptr;
  }
};

namespace detail {

struct RunningMoments {
  double n = 0, mean = 0, m2 = 0;
  void add(double x) {
    n += 1;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  double variance() const { return n > 1 ? m2 / (n - 1) : 0.0; }
  double standard_error() const { return std::sqrt(variance() / n); }
};

// |observed - expected| in standard errors; exact comparison when SE == 0.
inline double z_score(double observed, double expected, double se) {
  const double diff = std::abs(observed - expected);
  if (se > 0.0) return diff / se;
  return diff <= 1e-12 * std::max(1.0, std::abs(expected))
             ? 0.0
             : std::numeric_limits<double>::infinity();
}

inline std::vector<TestFunction> probe_family(const ColorSpace& space) {
  std::vector<TestFunction> probes;
  if (space.kind == ColorSpace::Kind::kFinite) {
    for (std::uint32_t t = 1; t <= space.size; ++t) {
      probes.push_back(TestFunction::tag_indicator(t));
    }
  } else if (space.kind == ColorSpace::Kind::kContinuum) {
    constexpr int kCells = 8;
    for (int i = 0; i < kCells; ++i) {
      probes.push_back(TestFunction::indicator(i / double(kCells), (i + 1) / double(kCells)));
    }
  }
  return probes;
}

}  // namespace detail

/// Monte Carlo spot checks of the standing hypotheses at the grid colors.
/// Failures are report entries, never exceptions.
template <ReplacementKernel K>
ValidationReport validate_assumptions(const K& kernel, std::size_t n_samples,
                                      const std::vector<Color>& s_grid, double tol,
                                      std::uint64_t seed = 0) {
  if (n_samples < 1000) throw ParameterError("validation needs at least 1000 samples");
  ValidationReport report;
  const auto probes = detail::probe_family(kernel.space());
  std::vector<double> probe_mu;
  for (const auto& f : probes) probe_mu.push_back(measure_integrate(kernel.intensity(), f));
  const double lambda2 = kernel.lambda2();
  std::vector<detail::RunningMoments> copy_stats;

  for (std::size_t gi = 0; gi < s_grid.size(); ++gi) {
    const Color& s = s_grid[gi];
    const std::string at = "@" + s.to_string();
    if (!kernel.space().contains(s)) {
      report.entries.push_back({"color-space" + at, CheckStatus::kFail, 0, 0, 0,
                                "grid color outside the kernel's space"});
      copy_stats.emplace_back();
      continue;
    }
    PhiloxStream rng(seed, static_cast<std::uint32_t>(gi), Substream::kKernel);
    detail::RunningMoments copies;
    std::vector<detail::RunningMoments> xi(probes.size());
    detail::RunningMoments second, alpha;
    std::size_t violations = 0, growing = 0;
    const double a_s = kernel.modulation()(s);
    for (std::size_t i = 0; i < n_samples; ++i) {
      const Replacement r = kernel.sample(s, rng);
      if (r.copies < -1 || r.added() < 0) ++violations;
      if (r.added() >= 1) ++growing;
      copies.add(static_cast<double>(r.copies));
      for (std::size_t k = 0; k < probes.size(); ++k) {
        double v = 0.0;
        for (const auto& c : r.innovation) v += probes[k](c);
        xi[k].add(v);
      }
      const double total = static_cast<double>(r.added());
      second.add(total * total);
      if (kernel.alpha_moment()) alpha.add(std::pow(std::abs(total), *kernel.alpha_moment()));
    }
    copy_stats.push_back(copies);

    const double zc = detail::z_score(copies.mean, lambda2, copies.standard_error());
    report.entries.push_back({"E2:copy-mean" + at,
                              zc <= tol ? CheckStatus::kPass : CheckStatus::kFail, zc, tol,
                              n_samples,
                              "mean C = " + std::to_string(copies.mean) +
                                  ", declared lambda2 = " + std::to_string(lambda2)});
    double worst = 0.0;
    std::size_t worst_k = 0;
    for (std::size_t k = 0; k < probes.size(); ++k) {
      const double z = detail::z_score(xi[k].mean, a_s * probe_mu[k], xi[k].standard_error());
      if (z > worst) {
        worst = z;
        worst_k = k;
      }
    }
    report.entries.push_back({"E3:intensity" + at,
                              worst <= tol ? CheckStatus::kPass : CheckStatus::kFail, worst,
                              tol, n_samples,
                              "worst probe #" + std::to_string(worst_k) + " of " +
                                  std::to_string(probes.size())});
    report.entries.push_back({"E1:non-emptying" + at,
                              violations == 0 ? CheckStatus::kPass : CheckStatus::kFail,
                              static_cast<double>(violations), 0.0, n_samples,
                              "draws with C < -1 or C + xi(1) < 0"});
    report.entries.push_back(
        {"E4:second-moment" + at,
         std::isfinite(second.mean) && growing > 0 ? CheckStatus::kPass
                                                   : CheckStatus::kIndeterminate,
         second.mean, 0.0, n_samples,
         "E(C+xi(1))^2 estimate; P(C+xi(1)>=1) estimate = " +
             std::to_string(static_cast<double>(growing) / n_samples)});
    if (kernel.alpha_moment()) {
      report.entries.push_back({"E14:alpha-moment" + at,
                                std::isfinite(alpha.mean) ? CheckStatus::kPass
                                                          : CheckStatus::kIndeterminate,
                                alpha.mean, *kernel.alpha_moment(), n_samples,
                                "E|C+xi(1)|^alpha estimate"});
    }
  }

  // Constancy of E_s(C) across the grid, independent of the declared value.
  double worst_pair = 0.0;
  for (std::size_t i = 0; i < copy_stats.size(); ++i) {
    for (std::size_t j = i + 1; j < copy_stats.size(); ++j) {
      if (copy_stats[i].n == 0 || copy_stats[j].n == 0) continue;
      const double se = std::hypot(copy_stats[i].standard_error(), copy_stats[j].standard_error());
      worst_pair = std::max(worst_pair, detail::z_score(copy_stats[i].mean, copy_stats[j].mean, se));
    }
  }
  report.entries.push_back({"E2:constancy",
                            worst_pair <= tol ? CheckStatus::kPass : CheckStatus::kFail,
                            worst_pair, tol, n_samples,
                            "largest two-sample separation of E_s(C) across the grid"});

  const auto [a_min, a_max] = kernel.modulation_bounds();
  report.entries.push_back({"a-bounds",
                            a_min > 0.0 && std::isfinite(a_max) ? CheckStatus::kIndeterminate
                                                                : CheckStatus::kFail,
                            a_min, a_max, 0,
                            "declared 0 < a_min <= a_max < inf; only spot-checked"});
  return report;
}

}  // namespace urnlab
