#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "urnlab/kernels.hpp"
#include "urnlab/rational.hpp"

namespace urnlab::testing {

/// Replays a fixed list of uniforms; exponential() consumes one uniform.
class ScriptedUniforms {
 public:
  explicit ScriptedUniforms(std::vector<double> values = {}) : values_(std::move(values)) {}

  double uniform() {
    if (next_ >= values_.size()) throw std::out_of_range("scripted uniforms exhausted");
    return values_[next_++];
  }
  double exponential() { return -std::log1p(-uniform()); }
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(bound));
  }
  std::size_t consumed() const { return next_; }

 private:
  std::vector<double> values_;
  std::size_t next_ = 0;
};

/// C = 1, xi = delta_tag1 on two colors.
inline FiniteKernel forced_kernel() {
  return builtin_finite(2, {{1, Rational(1)}}, {{{{1}, Rational(1)}}});
}

/// C = c, xi = one ball of a uniform tag on two colors.
inline FiniteKernel uniform_ball_kernel(std::int64_t c) {
  return builtin_finite(2, {{c, Rational(1)}}, {{{{1}, Rational(1, 2)}, {{2}, Rational(1, 2)}}});
}

/// Two-color surrogate of Simon's model: C ~ Bernoulli(2/5), xi = (1-C) delta_J.
inline FiniteKernel simon_surrogate() {
  std::vector<std::vector<FiniteOutcome>> table(2);
  for (auto& row : table) {
    row.push_back({1, {}, Rational(2, 5)});
    row.push_back({0, {1}, Rational(3, 10)});
    row.push_back({0, {2}, Rational(3, 10)});
  }
  return FiniteKernel::from_table(2, std::move(table));
}

}  // namespace urnlab::testing
