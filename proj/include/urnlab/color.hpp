#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <ostream>
#include <string>

#include "urnlab/errors.hpp"

namespace urnlab {

/// A point of the color space: a finite tag, a real in [0,1], or a pair of
/// those (product spaces).
///
/// Colors are stored by their canonical 128-bit encoding. A simple color has
/// `tail == kSimple`; each component is either `kTagBit | index` or the bit
/// pattern of a double in [0,1] (sign bit clear). Two continuum colors are
/// equal iff their bit patterns are equal.
class Color {
 public:
  static constexpr std::uint64_t kTagBit = std::uint64_t{1} << 63;
  static constexpr std::uint64_t kSimple = ~std::uint64_t{0};

  constexpr Color() = default;

  static constexpr Color tag(std::uint32_t index) {
    return Color(kTagBit | index, kSimple);
  }

  static Color point(double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw ColorSpaceError("continuum color must lie in [0,1], got " +
                            std::to_string(x));
    }
    if (x == 0.0) x = 0.0;  // folds -0.0
    return Color(std::bit_cast<std::uint64_t>(x), kSimple);
  }

  static Color composite(const Color& first, const Color& second) {
    if (first.is_composite() || second.is_composite()) {
      throw ColorSpaceError("composite colors nest only one level");
    }
    return Color(first.head_, second.head_);
  }

  constexpr bool is_composite() const { return tail_ != kSimple; }
  constexpr bool is_tag() const { return !is_composite() && (head_ & kTagBit); }
  constexpr bool is_point() const {
    return !is_composite() && !(head_ & kTagBit);
  }

  std::uint32_t tag_index() const {
    if (!is_tag()) throw ColorSpaceError("color is not a tag");
    return static_cast<std::uint32_t>(head_ & 0xFFFFFFFFu);
  }

  double value() const {
    if (!is_point()) throw ColorSpaceError("color is not a continuum point");
    return std::bit_cast<double>(head_);
  }

  Color first() const {
    if (!is_composite()) throw ColorSpaceError("color is not composite");
    return Color(head_, kSimple);
  }
  Color second() const {
    if (!is_composite()) throw ColorSpaceError("color is not composite");
    return Color(tail_, kSimple);
  }

  constexpr std::uint64_t head() const { return head_; }
  constexpr std::uint64_t tail() const { return tail_; }

  friend constexpr bool operator==(const Color&, const Color&) = default;

  /// splitmix64 finalizer over both words.
  constexpr std::uint64_t hash() const {
    std::uint64_t z = head_ ^ (tail_ * 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::string to_string() const {
    if (is_composite()) {
      return "(" + first().to_string() + "," + second().to_string() + ")";
    }
    if (is_tag()) return "tag" + std::to_string(tag_index());
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value());
    return buf;
  }

  friend std::ostream& operator<<(std::ostream& os, const Color& c) {
    return os << c.to_string();
  }

 private:
  constexpr Color(std::uint64_t head, std::uint64_t tail)
      : head_(head), tail_(tail) {}

  std::uint64_t head_ = kTagBit;
  std::uint64_t tail_ = kSimple;
};

/// Which space a kernel, function or measure lives on.
struct ColorSpace {
  enum class Kind { kFinite, kContinuum, kProduct };
  Kind kind = Kind::kContinuum;
  std::uint32_t size = 0;  // number of tags for kFinite

  static ColorSpace finite(std::uint32_t d) { return {Kind::kFinite, d}; }
  static ColorSpace continuum() { return {Kind::kContinuum, 0}; }
  static ColorSpace product() { return {Kind::kProduct, 0}; }

  bool contains(const Color& c) const {
    switch (kind) {
      case Kind::kFinite:
        return c.is_tag() && c.tag_index() >= 1 && c.tag_index() <= size;
      case Kind::kContinuum:
        return c.is_point();
      case Kind::kProduct:
        return c.is_composite();
    }
    return false;
  }

  friend bool operator==(const ColorSpace&, const ColorSpace&) = default;
};

}  // namespace urnlab

template <>
struct std::hash<urnlab::Color> {
  std::size_t operator()(const urnlab::Color& c) const noexcept {
    return static_cast<std::size_t>(c.hash());
  }
};
