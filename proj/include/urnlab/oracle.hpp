#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "urnlab/engine.hpp"
#include "urnlab/errors.hpp"
#include "urnlab/kernels.hpp"
#include "urnlab/measures.hpp"
#include "urnlab/montecarlo.hpp"
#include "urnlab/rational.hpp"
#include "urnlab/spectral.hpp"
#include "urnlab/stats.hpp"

namespace urnlab {

struct OracleOptions {
  std::size_t node_budget = 1'000'000;
  std::uint32_t max_depth = 8;
};

struct ExactMoments {
  Rational mean;            // E[U_n(f)]
  Rational normalized_mean;  // E[Ubar_n(f)]
  Rational variance;        // Var[U_n(f)]
  std::size_t nodes = 0;    // distinct states visited over all depths
};

/// Urn state over tags 1..d as a multiplicity vector.
using TagState = std::vector<std::uint64_t>;

inline TagState to_tag_state(const FiniteKernel& kernel, const CountingMeasure& u) {
  TagState st(kernel.colors(), 0);
  u.for_each_atom([&](const Color& c, std::uint64_t m) {
    if (!kernel.space().contains(c)) {
      throw ColorSpaceError("color " + c.to_string() + " outside the finite kernel space");
    }
    st[c.tag_index() - 1] += m;
  });
  return st;
}

/// f as exact rationals, one per tag. Doubles convert exactly.
inline std::vector<Rational> exact_values(const FiniteKernel& kernel, const TestFunction& f) {
  std::vector<Rational> v;
  for (std::uint32_t t = 1; t <= kernel.colors(); ++t) v.emplace_back(f(Color::tag(t)));
  return v;
}

/// Distribution of the urn after `depth` steps, states merged per depth.
inline std::map<TagState, Rational> path_distribution(const FiniteKernel& kernel,
                                                      const TagState& u0, std::uint32_t depth,
                                                      const OracleOptions& opt,
                                                      std::size_t* nodes_out = nullptr) {
  if (depth > opt.max_depth) {
    throw BudgetExceededError("depth " + std::to_string(depth) + " exceeds the cap " +
                              std::to_string(opt.max_depth));
  }
  std::uint64_t total0 = 0;
  for (auto m : u0) total0 += m;
  if (total0 == 0) throw EmptyMeasureError("initial urn must contain at least one ball");

  std::map<TagState, Rational> level{{u0, Rational(1)}};
  std::size_t nodes = 1;
  for (std::uint32_t k = 0; k < depth; ++k) {
    std::map<TagState, Rational> next;
    for (const auto& [state, p] : level) {
      std::uint64_t total = 0;
      for (auto m : state) total += m;
      for (std::uint32_t s = 0; s < state.size(); ++s) {
        if (state[s] == 0) continue;
        const Rational ps = p * Rational(state[s], total);
        for (const auto& o : kernel.outcomes(s + 1)) {
          TagState child = state;
          if (o.copies < 0) {
            child[s] -= static_cast<std::uint64_t>(-o.copies);
          } else {
            child[s] += static_cast<std::uint64_t>(o.copies);
          }
          for (auto b : o.balls) child[b - 1] += 1;
          auto [it, inserted] = next.try_emplace(std::move(child), 0);
          it->second += ps * o.probability;
          if (inserted && ++nodes > opt.node_budget) {
            throw BudgetExceededError("path enumeration exceeds the node budget of " +
                                      std::to_string(opt.node_budget));
          }
        }
      }
    }
    Rational mass = 0;
    for (const auto& [state, p] : next) mass += p;
    if (mass != 1) throw IntegrityError("path probabilities do not sum to 1");
    level = std::move(next);
  }
  if (nodes_out) *nodes_out = nodes;
  return level;
}

inline ExactMoments exact_moments(const FiniteKernel& kernel, const TagState& u0,
                                  std::uint32_t n, const std::vector<Rational>& f,
                                  const OracleOptions& opt = {}) {
  if (f.size() != kernel.colors()) throw ParameterError("f needs one value per tag");
  ExactMoments out;
  const auto dist = path_distribution(kernel, u0, n, opt, &out.nodes);
  Rational second = 0;
  for (const auto& [state, p] : dist) {
    Rational uf = 0;
    std::uint64_t total = 0;
    for (std::size_t t = 0; t < state.size(); ++t) {
      uf += f[t] * state[t];
      total += state[t];
    }
    out.mean += p * uf;
    second += p * uf * uf;
    out.normalized_mean += p * uf / total;
  }
  out.variance = second - out.mean * out.mean;
  return out;
}

inline ExactMoments exact_moments(const FiniteKernel& kernel, const CountingMeasure& u0,
                                  std::uint32_t n, const TestFunction& f,
                                  const OracleOptions& opt = {}) {
  return exact_moments(kernel, to_tag_state(kernel, u0), n, exact_values(kernel, f), opt);
}

/// E[U_{n+1}(f) - U_n(f) | U_n = urn] - ubar(R f), exactly.
inline Rational generator_identity_check(const FiniteKernel& kernel, const TagState& urn,
                                         const std::vector<Rational>& f) {
  std::uint64_t total = 0;
  for (auto m : urn) total += m;
  if (total == 0) throw EmptyMeasureError("urn must be nonempty");
  const auto rf = apply_R_exact(kernel, f);
  Rational direct = 0, spectral = 0;
  for (std::uint32_t s = 0; s < urn.size(); ++s) {
    if (urn[s] == 0) continue;
    const Rational w(urn[s], total);
    Rational drift = 0;
    for (const auto& o : kernel.outcomes(s + 1)) {
      Rational jump = f[s] * o.copies;
      for (auto b : o.balls) jump += f[b - 1];
      drift += o.probability * jump;
    }
    direct += w * drift;
    spectral += w * rf[s];
  }
  return direct - spectral;
}

struct OracleComparison {
  ExactMoments exact;
  double mc_mean = 0.0;
  double mc_standard_error = 0.0;
  TestOutcome outcome;
};

/// MC estimate of E[Ubar_n(f)] against the exact value, pass within 4 SE.
inline OracleComparison oracle_vs_montecarlo(const FiniteKernel& kernel, const CountingMeasure& u0,
                                             std::uint32_t n, const TestFunction& f,
                                             std::uint32_t replicas, std::uint64_t seed,
                                             unsigned threads, const OracleOptions& opt = {}) {
  OracleComparison cmp;
  cmp.exact = exact_moments(kernel, u0, n, f, opt);
  EngineOptions options;
  options.observables = {{"f", f}};
  const auto values = run_replicas(replicas, threads, [&](std::size_t k) {
    Engine<FiniteKernel> engine(kernel, u0, seed, static_cast<std::uint32_t>(k), options);
    engine.advance_steps(n);
    return engine.observable(0) / static_cast<double>(engine.urn().total());
  });
  cmp.mc_mean = stats::mean(values);
  cmp.mc_standard_error = replicas >= 2 ? stats::standard_error_of_mean(values) : 0.0;
  const double exact = to_double(cmp.exact.normalized_mean);
  auto& t = cmp.outcome;
  t.name = "oracle_vs_mc[n=" + std::to_string(n) + "]";
  t.observed = cmp.mc_mean;
  t.predicted = exact;
  t.standard_error = cmp.mc_standard_error;
  t.tolerance = 4.0 * cmp.mc_standard_error + 1e-12 * std::max(1.0, std::abs(exact));
  t.passed = std::abs(cmp.mc_mean - exact) <= t.tolerance;
  t.detail = "exact " + to_string(cmp.exact.normalized_mean);
  return cmp;
}

}  // namespace urnlab
