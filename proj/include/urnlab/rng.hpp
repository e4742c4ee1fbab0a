#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace urnlab {

/// Philox4x32-10 block function (Salmon et al., Random123).
inline std::array<std::uint32_t, 4> philox4x32_10(
    std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

/// Sub-streams of one replica, in their fixed order.
enum class Substream : std::uint32_t { kHolding = 0, kColor = 1, kKernel = 2 };

/// Counter-based random stream identified by (seed, replica, substream).
///
/// Each 128-bit Philox block yields two 64-bit words. Streams with distinct
/// identifiers never share a counter, so replicas are reproducible regardless
/// of scheduling.
class PhiloxStream {
 public:
  using result_type = std::uint64_t;

  PhiloxStream() : PhiloxStream(0, 0, 0) {}
  PhiloxStream(std::uint64_t seed, std::uint32_t replica,
               std::uint32_t substream = 0)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        replica_(replica),
        substream_(substream) {}
  PhiloxStream(std::uint64_t seed, std::uint32_t replica, Substream substream)
      : PhiloxStream(seed, replica, static_cast<std::uint32_t>(substream)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    if (buffered_ == 0) refill();
    return buffer_[--buffered_];
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Exponential(1).
  double exponential() { return -std::log1p(-uniform()); }

  /// Uniform integer in [0, bound), multiply-shift reduction.
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>((*this)()) * bound) >> 64);
  }

  std::uint64_t position() const { return block_ * 2 + (2 - buffered_); }

 private:
  void refill() {
    const auto out = philox4x32_10(
        {static_cast<std::uint32_t>(block_),
         static_cast<std::uint32_t>(block_ >> 32), substream_, replica_},
        key_);
    // buffer_[1] is served first.
    buffer_[1] = (std::uint64_t{out[1]} << 32) | out[0];
    buffer_[0] = (std::uint64_t{out[3]} << 32) | out[2];
    buffered_ = 2;
    ++block_;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint32_t replica_;
  std::uint32_t substream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
};

/// Anything that hands out uniform doubles on [0,1) and integer draws.
template <class R>
concept UniformSource = requires(R& r, std::uint64_t bound) {
  { r.uniform() } -> std::convertible_to<double>;
  { r.below(bound) } -> std::convertible_to<std::uint64_t>;
};

}  // namespace urnlab
