#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "urnlab/color.hpp"
#include "urnlab/errors.hpp"
#include "urnlab/rng.hpp"
#include "urnlab/test_function.hpp"

namespace urnlab {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// Open-addressing map from Color to a 32-bit slot index.
///
/// Linear probing over a power-of-two table. An entry packs the slot with a
/// 32-bit hash fingerprint; the home bucket is derived from the fingerprint,
/// so growth never needs the keys. Entries are never erased one by one.
/// Tables are capped at 2^32 buckets.
class ColorIndex {
 public:
  static constexpr std::uint32_t kNotFound = 0xFFFFFFFFu;

  std::uint32_t find(const Color& c, std::span<const Color> keys) const {
    if (table_.empty()) return kNotFound;
    const auto fp = fingerprint(c);
    for (std::size_t i = home(fp);; i = (i + 1) & mask_) {
      const std::uint64_t e = table_[i];
      if (e == kEmpty) return kNotFound;
      const auto slot = static_cast<std::uint32_t>(e);
      if (static_cast<std::uint32_t>(e >> 32) == fp && keys[slot] == c) {
        return slot;
      }
    }
  }

  /// Hints the cache with the home bucket of c.
  void prefetch(const Color& c) const {
    if (!table_.empty()) __builtin_prefetch(&table_[home(fingerprint(c))]);
  }

  /// Inserts a key known to be absent.
  void insert(const Color& c, std::uint32_t slot) {
    if ((size_ + 1) * 4 > table_.size() * 3) resize(table_.empty() ? 16 : table_.size() * 2);
    place((std::uint64_t{fingerprint(c)} << 32) | slot);
    ++size_;
  }

  void rebuild(std::span<const Color> keys) {
    std::size_t cap = 16;
    while (cap * 3 < keys.size() * 4 + 4) cap <<= 1;
    table_.assign(cap, kEmpty);
    mask_ = cap - 1;
    shift_ = 32 - std::countr_zero(cap);
    for (std::uint32_t s = 0; s < keys.size(); ++s) {
      place((std::uint64_t{fingerprint(keys[s])} << 32) | s);
    }
    size_ = keys.size();
  }

  std::size_t size() const { return size_; }

 private:
  static constexpr std::uint64_t kEmpty = ~std::uint64_t{0};

  static std::uint32_t fingerprint(const Color& c) {
    return static_cast<std::uint32_t>(c.hash() >> 32);
  }

  // Top fingerprint bits, so a doubled table is filled in nearly
  // sequential order on rehash.
  std::size_t home(std::uint32_t fp) const {
    return static_cast<std::size_t>(std::uint64_t{fp} >> shift_);
  }

  void place(std::uint64_t e) {
    std::size_t i = home(static_cast<std::uint32_t>(e >> 32));
    while (table_[i] != kEmpty) i = (i + 1) & mask_;
    table_[i] = e;
  }

  void resize(std::size_t cap) {
    std::vector<std::uint64_t> old = std::move(table_);
    table_.assign(cap, kEmpty);
    mask_ = cap - 1;
    shift_ = 32 - std::countr_zero(cap);
    for (std::uint64_t e : old) {
      if (e != kEmpty) place(e);
    }
  }

  std::vector<std::uint64_t> table_;
  std::size_t mask_ = 0;
  int shift_ = 32;
  std::size_t size_ = 0;
};

/// Finite counting measure: colors with positive integer multiplicities.
///
/// Atoms live in slots. A slot whose multiplicity drops to zero stays
/// allocated (and indexed) until `compact()`, but it is not an atom: `size()`
/// and `for_each_atom` skip it.
class CountingMeasure {
 public:
  CountingMeasure() = default;

  CountingMeasure(std::initializer_list<std::pair<Color, std::uint64_t>> atoms) {
    for (const auto& [c, m] : atoms) add(c, m);
  }

  std::uint64_t total() const { return total_; }
  std::size_t size() const { return colors_.size() - zero_slots_; }
  bool empty() const { return total_ == 0; }

  std::size_t slot_count() const { return colors_.size(); }
  std::size_t zero_slots() const { return zero_slots_; }
  const Color& color(std::size_t slot) const { return colors_[slot]; }
  std::uint64_t multiplicity_at(std::size_t slot) const { return mult_[slot]; }
  std::span<const std::uint64_t> multiplicities() const { return mult_; }
  std::span<const Color> colors() const { return colors_; }

  std::uint64_t multiplicity(const Color& c) const {
    const auto slot = index_.find(c, colors_);
    std::uint64_t m = slot == ColorIndex::kNotFound ? 0 : mult_[slot];
    for (std::size_t j = indexed_; j < colors_.size(); ++j) {
      if (colors_[j] == c) m += mult_[j];
    }
    return m;
  }

  void prefetch(const Color& c) const { index_.prefetch(c); }

  /// Slot holding `c`, or ColorIndex::kNotFound.
  std::uint32_t find(const Color& c) const {
    const auto slot = index_.find(c, colors_);
    if (slot != ColorIndex::kNotFound) return slot;
    for (std::size_t j = indexed_; j < colors_.size(); ++j) {
      if (colors_[j] == c) return static_cast<std::uint32_t>(j);
    }
    return ColorIndex::kNotFound;
  }

  /// Adds k balls of color c. Returns the slot and whether it was created.
  std::pair<std::uint32_t, bool> add(const Color& c, std::uint64_t k = 1) {
    settle();
    auto slot = index_.find(c, colors_);
    bool created = false;
    if (slot == ColorIndex::kNotFound) {
      slot = static_cast<std::uint32_t>(colors_.size());
      colors_.push_back(c);
      mult_.push_back(0);
      index_.insert(c, slot);
      ++indexed_;
      ++zero_slots_;
      created = true;
    }
    add_at(slot, k);
    return {slot, created};
  }

  /// Appends a slot for c without consulting the index. Until `settle()`,
  /// the slot is invisible to lookups and may duplicate an existing color;
  /// as a measure the urn is unchanged by the duplication.
  std::uint32_t append_unindexed(const Color& c, std::uint64_t k) {
    const auto slot = static_cast<std::uint32_t>(colors_.size());
    colors_.push_back(c);
    mult_.push_back(0);
    ++zero_slots_;
    add_at(slot, k);
    return slot;
  }

  bool has_unindexed() const { return indexed_ < colors_.size(); }

  /// Indexes appended slots. A slot whose color is already indexed is merged
  /// into the older slot; `on_merge(from, to, k)` reports each merge.
  template <class OnMerge>
  void settle(OnMerge&& on_merge) {
    for (; indexed_ < colors_.size(); ++indexed_) {
      const auto slot = static_cast<std::uint32_t>(indexed_);
      const auto prior = index_.find(colors_[slot], colors_);
      if (prior == ColorIndex::kNotFound) {
        index_.insert(colors_[slot], slot);
        continue;
      }
      const std::uint64_t k = mult_[slot];
      remove_at(slot, k);
      add_at(prior, k);
      on_merge(slot, prior, k);
    }
  }

  void settle() {
    settle([](std::uint32_t, std::uint32_t, std::uint64_t) {});
  }

  void add_at(std::size_t slot, std::uint64_t k) {
    if (k == 0) return;
    if (mult_[slot] == 0) --zero_slots_;
    mult_[slot] += k;
    total_ += k;
  }

  void remove_at(std::size_t slot, std::uint64_t k = 1) {
    if (k == 0) return;
    if (mult_[slot] < k) {
      throw IntegrityError("multiplicity of " + colors_[slot].to_string() +
                           " would become negative");
    }
    mult_[slot] -= k;
    total_ -= k;
    if (mult_[slot] == 0) ++zero_slots_;
  }

  /// Drops zero-multiplicity slots. Slot numbers change.
  void compact() {
    settle();
    std::size_t out = 0;
    for (std::size_t s = 0; s < colors_.size(); ++s) {
      if (mult_[s] == 0) continue;
      colors_[out] = colors_[s];
      mult_[out] = mult_[s];
      ++out;
    }
    colors_.resize(out);
    mult_.resize(out);
    zero_slots_ = 0;
    index_.rebuild(colors_);
    indexed_ = colors_.size();
  }

  template <class F>
  void for_each_atom(F&& f) const {
    for (std::size_t s = 0; s < colors_.size(); ++s) {
      if (mult_[s] != 0) f(colors_[s], mult_[s]);
    }
  }

 private:
  std::vector<Color> colors_;
  std::vector<std::uint64_t> mult_;
  ColorIndex index_;
  std::uint64_t total_ = 0;
  std::size_t zero_slots_ = 0;
  std::size_t indexed_ = 0;
};

/// nu(f) = sum over atoms of multiplicity * f(color).
inline double integrate(const CountingMeasure& nu, const TestFunction& f) {
  CompensatedSum acc;
  nu.for_each_atom([&](const Color& c, std::uint64_t m) {
    acc.add(static_cast<double>(m) * f(c));
  });
  return acc.value();
}

struct WeightedAtom {
  Color color;
  double weight;
};

/// Probability weights multiplicity / total, one per atom.
inline std::vector<WeightedAtom> normalize(const CountingMeasure& nu) {
  if (nu.total() == 0) throw EmptyMeasureError("cannot normalize an empty measure");
  std::vector<WeightedAtom> out;
  out.reserve(nu.size());
  const double total = static_cast<double>(nu.total());
  nu.for_each_atom([&](const Color& c, std::uint64_t m) {
    out.push_back({c, static_cast<double>(m) / total});
  });
  return out;
}

/// Finite measure: atomic, or a nonnegative piecewise-polynomial density on
/// [0,1].
class FiniteMeasure {
 public:
  static FiniteMeasure atomic(std::vector<WeightedAtom> atoms) {
    for (const auto& a : atoms) {
      if (!(a.weight >= 0.0)) throw ParameterError("atomic weights must be >= 0");
    }
    FiniteMeasure m;
    m.repr_ = std::move(atoms);
    m.finish();
    return m;
  }

  static FiniteMeasure density(PiecewisePolynomial d) {
    const auto& b = d.breaks();
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
      for (double x : {b[i], 0.5 * (b[i] + b[i + 1]), std::nextafter(b[i + 1], 0.0)}) {
        if (d(x) < 0.0) throw ParameterError("density must be nonnegative");
      }
    }
    FiniteMeasure m;
    m.repr_ = std::move(d);
    m.finish();
    return m;
  }

  /// scale * Lebesgue measure on [0,1].
  static FiniteMeasure lebesgue(double scale = 1.0) {
    return density(PiecewisePolynomial::constant(scale));
  }

  bool is_atomic() const { return repr_.index() == 0; }
  const std::vector<WeightedAtom>& atoms() const { return std::get<0>(repr_); }
  const PiecewisePolynomial& density_function() const { return std::get<1>(repr_); }
  double total_mass() const { return total_mass_; }

  FiniteMeasure normalized() const {
    FiniteMeasure m = *this;
    if (is_atomic()) {
      for (auto& a : std::get<0>(m.repr_)) a.weight /= total_mass_;
    } else {
      m.repr_ = density_function().scaled(1.0 / total_mass_);
    }
    m.finish();
    return m;
  }

  /// Draws a color from the normalized measure.
  template <UniformSource Rng>
  Color sample(Rng& rng) const {
    if (is_atomic()) {
      const double u = rng.uniform() * total_mass_;
      double acc = 0.0;
      const auto& a = atoms();
      for (const auto& atom : a) {
        acc += atom.weight;
        if (u < acc) return atom.color;
      }
      return a.back().color;
    }
    const auto& d = density_function();
    const auto& b = d.breaks();
    const double u = rng.uniform() * total_mass_;
    std::size_t piece = std::upper_bound(piece_cdf_.begin(), piece_cdf_.end(), u) -
                        piece_cdf_.begin();
    piece = std::min(piece, piece_cdf_.size() - 1);
    const double lo = b[piece];
    const double hi = b[piece + 1];
    const auto& c = d.coeffs()[piece];
    if (c.size() == 1) return Color::point(lo + (hi - lo) * rng.uniform());
    double bound = 0.0;
    for (double v : c) bound += std::abs(v);
    for (;;) {
      const double x = lo + (hi - lo) * rng.uniform();
      if (rng.uniform() * bound <= d(x)) return Color::point(x);
    }
  }

 private:
  FiniteMeasure() = default;

  void finish() {
    if (is_atomic()) {
      CompensatedSum acc;
      for (const auto& a : atoms()) acc.add(a.weight);
      total_mass_ = acc.value();
    } else {
      const auto& d = density_function();
      piece_cdf_.clear();
      CompensatedSum acc;
      for (std::size_t i = 0; i + 1 < d.breaks().size(); ++i) {
        const auto piece =
            PiecewisePolynomial::indicator(d.breaks()[i], d.breaks()[i + 1]) * d;
        acc.add(piece.integral());
        piece_cdf_.push_back(acc.value());
      }
      total_mass_ = acc.value();
    }
    if (!(total_mass_ > 0.0)) throw ParameterError("finite measure must have positive mass");
  }

  std::variant<std::vector<WeightedAtom>, PiecewisePolynomial> repr_;
  std::vector<double> piece_cdf_;
  double total_mass_ = 0.0;
};

/// mu(f), exact whenever an exact route exists.
inline double measure_integrate(const FiniteMeasure& mu, const TestFunction& f) {
  if (mu.is_atomic()) {
    CompensatedSum acc;
    for (const auto& a : mu.atoms()) acc.add(a.weight * f(a.color));
    return acc.value();
  }
  if (const auto* c = f.as_constant()) return c->value * mu.total_mass();
  if (const auto* p = f.as_piecewise()) return (mu.density_function() * *p).integral();
  if (const auto* g = f.as_generic(); g && g->mu_integral) return *g->mu_integral;
  throw UnsupportedPairError("no exact integral of this function against a density measure");
}

}  // namespace urnlab
