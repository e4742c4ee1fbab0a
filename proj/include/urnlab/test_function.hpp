#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "urnlab/color.hpp"
#include "urnlab/errors.hpp"

namespace urnlab {

/// Piecewise polynomial on [0,1]. Piece i covers [breaks[i], breaks[i+1]),
/// the last piece also contains 1. Coefficients are in powers of s.
///
/// The family is closed under sums and products and integrates exactly
/// against Lebesgue measure (up to rounding), which is all the continuum
/// integration the library ever does.
class PiecewisePolynomial {
 public:
  PiecewisePolynomial() : PiecewisePolynomial({0.0, 1.0}, {{0.0}}) {}

  PiecewisePolynomial(std::vector<double> breaks,
                      std::vector<std::vector<double>> coeffs)
      : breaks_(std::move(breaks)), coeffs_(std::move(coeffs)) {
    if (breaks_.size() < 2 || breaks_.front() != 0.0 || breaks_.back() != 1.0) {
      throw ParameterError("piecewise polynomial breaks must span [0,1]");
    }
    if (coeffs_.size() + 1 != breaks_.size()) {
      throw ParameterError("piecewise polynomial needs one piece per interval");
    }
    for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
      if (!(breaks_[i] < breaks_[i + 1])) {
        throw ParameterError("piecewise polynomial breaks must increase");
      }
    }
    for (auto& c : coeffs_) {
      if (c.empty()) c.push_back(0.0);
    }
  }

  static PiecewisePolynomial constant(double c) {
    return PiecewisePolynomial({0.0, 1.0}, {{c}});
  }

  /// 1 on [lo, hi), closed at 1 when hi == 1.
  static PiecewisePolynomial indicator(double lo, double hi) {
    if (!(0.0 <= lo && lo <= hi && hi <= 1.0)) {
      throw ParameterError("indicator interval must satisfy 0 <= lo <= hi <= 1");
    }
    std::vector<double> breaks{0.0};
    std::vector<std::vector<double>> coeffs;
    if (lo > 0.0) {
      breaks.push_back(lo);
      coeffs.push_back({0.0});
    }
    if (hi > lo) {
      if (hi < 1.0) breaks.push_back(hi);
      coeffs.push_back({1.0});
    }
    if (hi < 1.0) coeffs.push_back({0.0});
    if (breaks.back() != 1.0) breaks.push_back(1.0);
    if (coeffs.empty()) coeffs.push_back({0.0});
    return PiecewisePolynomial(std::move(breaks), std::move(coeffs));
  }

  static PiecewisePolynomial monomial(int power) {
    if (power < 0) throw ParameterError("monomial power must be >= 0");
    std::vector<double> c(static_cast<std::size_t>(power) + 1, 0.0);
    c.back() = 1.0;
    return PiecewisePolynomial({0.0, 1.0}, {std::move(c)});
  }

  /// Piecewise-constant function with `values[i]` on [breaks[i], breaks[i+1]).
  static PiecewisePolynomial step(std::vector<double> breaks,
                                  const std::vector<double>& values) {
    std::vector<std::vector<double>> coeffs;
    coeffs.reserve(values.size());
    for (double v : values) coeffs.push_back({v});
    return PiecewisePolynomial(std::move(breaks), std::move(coeffs));
  }

  double operator()(double x) const {
    const auto it = std::upper_bound(breaks_.begin() + 1, breaks_.end() - 1, x);
    const auto& c = coeffs_[static_cast<std::size_t>(it - breaks_.begin() - 1)];
    double acc = 0.0;
    for (auto k = c.size(); k-- > 0;) acc = acc * x + c[k];
    return acc;
  }

  /// Integral over [0,1] against Lebesgue measure.
  double integral() const {
    double total = 0.0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      const double lo = breaks_[i];
      const double hi = breaks_[i + 1];
      double lo_pow = lo, hi_pow = hi;
      for (std::size_t k = 0; k < coeffs_[i].size(); ++k) {
        total += coeffs_[i][k] * (hi_pow - lo_pow) / static_cast<double>(k + 1);
        lo_pow *= lo;
        hi_pow *= hi;
      }
    }
    return total;
  }

  double sup_bound() const {
    double bound = 0.0;
    for (const auto& c : coeffs_) {
      double piece = 0.0;
      for (double v : c) piece += std::abs(v);
      bound = std::max(bound, piece);
    }
    return bound;
  }

  bool is_piecewise_constant() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const auto& c) {
      return std::all_of(c.begin() + 1, c.end(),
                         [](double v) { return v == 0.0; });
    });
  }

  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<std::vector<double>>& coeffs() const { return coeffs_; }

  template <class Op>
  static PiecewisePolynomial combine(const PiecewisePolynomial& a,
                                     const PiecewisePolynomial& b, Op op) {
    std::vector<double> breaks;
    std::set_union(a.breaks_.begin(), a.breaks_.end(), b.breaks_.begin(),
                   b.breaks_.end(), std::back_inserter(breaks));
    std::vector<std::vector<double>> coeffs;
    coeffs.reserve(breaks.size() - 1);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      const double mid = 0.5 * (breaks[i] + breaks[i + 1]);
      coeffs.push_back(op(a.piece_at(mid), b.piece_at(mid)));
    }
    return PiecewisePolynomial(std::move(breaks), std::move(coeffs)).merged();
  }

  friend PiecewisePolynomial operator+(const PiecewisePolynomial& a,
                                       const PiecewisePolynomial& b) {
    return combine(a, b, [](const auto& p, const auto& q) {
      std::vector<double> r(std::max(p.size(), q.size()), 0.0);
      for (std::size_t k = 0; k < p.size(); ++k) r[k] += p[k];
      for (std::size_t k = 0; k < q.size(); ++k) r[k] += q[k];
      return r;
    });
  }

  friend PiecewisePolynomial operator*(const PiecewisePolynomial& a,
                                       const PiecewisePolynomial& b) {
    return combine(a, b, [](const auto& p, const auto& q) {
      std::vector<double> r(p.size() + q.size() - 1, 0.0);
      for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
      return r;
    });
  }

  PiecewisePolynomial scaled(double alpha) const {
    auto out = *this;
    for (auto& c : out.coeffs_)
      for (auto& v : c) v *= alpha;
    return out;
  }

  PiecewisePolynomial shifted(double c) const {
    auto out = *this;
    for (auto& p : out.coeffs_) p[0] += c;
    return out;
  }

 private:
  const std::vector<double>& piece_at(double x) const {
    const auto it = std::upper_bound(breaks_.begin() + 1, breaks_.end() - 1, x);
    return coeffs_[static_cast<std::size_t>(it - breaks_.begin() - 1)];
  }

  // Drops trailing zero coefficients and fuses equal neighbours.
  PiecewisePolynomial merged() && {
    for (auto& c : coeffs_) {
      while (c.size() > 1 && c.back() == 0.0) c.pop_back();
    }
    std::vector<double> breaks{breaks_.front()};
    std::vector<std::vector<double>> coeffs{coeffs_.front()};
    for (std::size_t i = 1; i < coeffs_.size(); ++i) {
      if (coeffs_[i] == coeffs.back()) continue;
      breaks.push_back(breaks_[i]);
      coeffs.push_back(coeffs_[i]);
    }
    breaks.push_back(1.0);
    breaks_ = std::move(breaks);
    coeffs_ = std::move(coeffs);
    return std::move(*this);
  }

  std::vector<double> breaks_;
  std::vector<std::vector<double>> coeffs_;
};

/// Function on tags 1..values.size(); `fallback` elsewhere on the tag space.
struct TagTable {
  std::vector<double> values;
  double fallback = 0.0;

  double at(std::uint32_t tag) const {
    return (tag >= 1 && tag <= values.size()) ? values[tag - 1] : fallback;
  }
};

/// Arbitrary bounded function with a declared sup bound and, optionally, its
/// exact integral against the intensity measure it will be used with.
struct GenericFunction {
  std::function<double(const Color&)> evaluator;
  double sup_bound = 0.0;
  std::optional<double> mu_integral;
};

struct ConstantFunction {
  double value = 0.0;
};

/// A bounded measurable test function f.
class TestFunction {
 public:
  using Repr = std::variant<ConstantFunction, PiecewisePolynomial, TagTable,
                            GenericFunction>;

  TestFunction() : repr_(ConstantFunction{0.0}) {}
  TestFunction(PiecewisePolynomial p) : repr_(std::move(p)) {}
  TestFunction(TagTable t) : repr_(std::move(t)) {}
  TestFunction(GenericFunction g) : repr_(std::move(g)) {}
  TestFunction(ConstantFunction c) : repr_(c) {}

  static TestFunction constant(double c) { return ConstantFunction{c}; }
  static TestFunction one() { return constant(1.0); }
  static TestFunction zero() { return constant(0.0); }
  static TestFunction indicator(double lo, double hi) {
    return PiecewisePolynomial::indicator(lo, hi);
  }
  static TestFunction monomial(int power) {
    return PiecewisePolynomial::monomial(power);
  }
  /// 1 at the given tag, 0 elsewhere.
  static TestFunction tag_indicator(std::uint32_t tag) {
    TagTable t;
    t.values.assign(tag, 0.0);
    t.values[tag - 1] = 1.0;
    return t;
  }
  static TestFunction table(std::vector<double> values) {
    return TagTable{std::move(values), 0.0};
  }

  double operator()(const Color& s) const {
    switch (repr_.index()) {
      case 0:
        return std::get<0>(repr_).value;
      case 1:
        return std::get<1>(repr_)(s.value());
      case 2:
        return std::get<2>(repr_).at(s.tag_index());
      default:
        return std::get<3>(repr_).evaluator(s);
    }
  }

  double sup_bound() const {
    return std::visit(
        [](const auto& r) -> double {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, ConstantFunction>) {
            return std::abs(r.value);
          } else if constexpr (std::is_same_v<T, PiecewisePolynomial>) {
            return r.sup_bound();
          } else if constexpr (std::is_same_v<T, TagTable>) {
            double b = std::abs(r.fallback);
            for (double v : r.values) b = std::max(b, std::abs(v));
            return b;
          } else {
            return r.sup_bound;
          }
        },
        repr_);
  }

  const Repr& repr() const { return repr_; }
  bool is_constant() const { return repr_.index() == 0; }
  const ConstantFunction* as_constant() const {
    return std::get_if<ConstantFunction>(&repr_);
  }
  const PiecewisePolynomial* as_piecewise() const {
    return std::get_if<PiecewisePolynomial>(&repr_);
  }
  const TagTable* as_table() const { return std::get_if<TagTable>(&repr_); }
  const GenericFunction* as_generic() const {
    return std::get_if<GenericFunction>(&repr_);
  }

  TestFunction scaled(double alpha) const {
    return std::visit(
        [alpha](const auto& r) -> TestFunction {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, ConstantFunction>) {
            return ConstantFunction{alpha * r.value};
          } else if constexpr (std::is_same_v<T, PiecewisePolynomial>) {
            return r.scaled(alpha);
          } else if constexpr (std::is_same_v<T, TagTable>) {
            TagTable t = r;
            for (auto& v : t.values) v *= alpha;
            t.fallback *= alpha;
            return t;
          } else {
            GenericFunction g;
            g.evaluator = [alpha, f = r.evaluator](const Color& s) {
              return alpha * f(s);
            };
            g.sup_bound = std::abs(alpha) * r.sup_bound;
            if (r.mu_integral) g.mu_integral = alpha * *r.mu_integral;
            return g;
          }
        },
        repr_);
  }

  /// f + c.
  TestFunction shifted(double c) const {
    return *this + constant(c);
  }

  friend TestFunction operator+(const TestFunction& f, const TestFunction& g) {
    if (const auto* c = f.as_constant()) return g.plus_constant(c->value);
    if (const auto* c = g.as_constant()) return f.plus_constant(c->value);
    if (f.as_piecewise() && g.as_piecewise()) {
      return *f.as_piecewise() + *g.as_piecewise();
    }
    if (f.as_table() && g.as_table()) {
      return zip_tables(*f.as_table(), *g.as_table(),
                        [](double a, double b) { return a + b; });
    }
    GenericFunction out;
    out.evaluator = [f, g](const Color& s) { return f(s) + g(s); };
    out.sup_bound = f.sup_bound() + g.sup_bound();
    return out;
  }

  friend TestFunction operator-(const TestFunction& f, const TestFunction& g) {
    return f + g.scaled(-1.0);
  }

  friend TestFunction operator*(const TestFunction& f, const TestFunction& g) {
    if (const auto* c = f.as_constant()) return g.scaled(c->value);
    if (const auto* c = g.as_constant()) return f.scaled(c->value);
    if (f.as_piecewise() && g.as_piecewise()) {
      return *f.as_piecewise() * *g.as_piecewise();
    }
    if (f.as_table() && g.as_table()) {
      return zip_tables(*f.as_table(), *g.as_table(),
                        [](double a, double b) { return a * b; });
    }
    GenericFunction out;
    out.evaluator = [f, g](const Color& s) { return f(s) * g(s); };
    out.sup_bound = f.sup_bound() * g.sup_bound();
    return out;
  }

 private:
  TestFunction plus_constant(double c) const {
    return std::visit(
        [c](const auto& r) -> TestFunction {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, ConstantFunction>) {
            return ConstantFunction{r.value + c};
          } else if constexpr (std::is_same_v<T, PiecewisePolynomial>) {
            return r.shifted(c);
          } else if constexpr (std::is_same_v<T, TagTable>) {
            TagTable t = r;
            for (auto& v : t.values) v += c;
            t.fallback += c;
            return t;
          } else {
            GenericFunction g;
            g.evaluator = [c, f = r.evaluator](const Color& s) {
              return f(s) + c;
            };
            g.sup_bound = r.sup_bound + std::abs(c);
            return g;
          }
        },
        repr_);
  }

  template <class Op>
  static TagTable zip_tables(const TagTable& a, const TagTable& b, Op op) {
    TagTable out;
    const auto n = std::max(a.values.size(), b.values.size());
    out.values.resize(n);
    for (std::uint32_t t = 1; t <= n; ++t) out.values[t - 1] = op(a.at(t), b.at(t));
    out.fallback = op(a.fallback, b.fallback);
    return out;
  }

  Repr repr_;
};

}  // namespace urnlab
