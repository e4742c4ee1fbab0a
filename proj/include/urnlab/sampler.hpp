#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "urnlab/errors.hpp"
#include "urnlab/rng.hpp"

namespace urnlab {

/// Dynamic weighted sampler over slots with integer weights.
///
/// Slots are grouped in blocks of kBlock. Block sums sit at the bottom of an
/// 8-ary tree of partial sums; every tree node is one cache line holding the
/// sums of its eight children. The slot weights themselves are not copied:
/// every query takes the current weight array (the urn's multiplicities),
/// and the caller reports each change through `add`/`subtract`/`push_back`.
/// Sampling reads one line per level and then scans one block. All
/// operations are O(log n).
class UrnSampler {
 public:
  static constexpr std::size_t kBlock = 16;

  UrnSampler() = default;
  explicit UrnSampler(std::span<const std::uint64_t> weights) { rebuild(weights); }

  std::size_t size() const { return size_; }
  std::uint64_t total_weight() const { return total_; }

  /// O(n) construction.
  void rebuild(std::span<const std::uint64_t> weights) {
    size_ = weights.size();
    total_ = 0;
    levels_.clear();
    levels_.emplace_back();
    const std::size_t blocks = (size_ + kBlock - 1) / kBlock;
    resize_level(0, blocks);
    for (std::size_t s = 0; s < size_; ++s) {
      at(0, s / kBlock) += weights[s];
      total_ += weights[s];
    }
    std::size_t n = blocks;
    while (n > kFan) {
      const std::size_t up = (n + kFan - 1) / kFan;
      levels_.emplace_back();
      const std::size_t l = levels_.size() - 1;
      resize_level(l, up);
      for (std::size_t i = 0; i < n; ++i) at(l, i / kFan) += at(l - 1, i);
      n = up;
    }
    counts_.assign(levels_.size(), 0);
    n = blocks;
    for (std::size_t l = 0; l < levels_.size(); ++l) {
      counts_[l] = n;
      n = (n + kFan - 1) / kFan;
    }
  }

  /// A new slot of weight w was appended.
  void push_back(std::uint64_t w) {
    if (size_ % kBlock == 0) grow(size_ / kBlock);
    ++size_;
    add(size_ - 1, w);
  }

  /// The weight of `slot` grew by delta.
  void add(std::size_t slot, std::uint64_t delta) {
    total_ += delta;
    std::size_t i = slot / kBlock;
    for (std::size_t l = 0; l < levels_.size(); ++l, i /= kFan) at(l, i) += delta;
  }

  /// The weight of `slot` shrank by delta.
  void subtract(std::size_t slot, std::uint64_t delta) {
    if (total_ < delta) throw IntegrityError("sampler weight would become negative");
    total_ -= delta;
    std::size_t i = slot / kBlock;
    for (std::size_t l = 0; l < levels_.size(); ++l, i /= kFan) at(l, i) -= delta;
  }

  /// Sum of weights of slots [0, slot).
  std::uint64_t prefix(std::size_t slot, std::span<const std::uint64_t> weights) const {
    std::uint64_t s = 0;
    std::size_t i = slot / kBlock;
    for (std::size_t l = 0; l < levels_.size(); ++l, i /= kFan) {
      for (std::size_t j = i - i % kFan; j < i; ++j) s += at(l, j);
    }
    for (std::size_t j = slot - slot % kBlock; j < slot; ++j) s += weights[j];
    return s;
  }

  /// Slot j with prefix(j) <= target < prefix(j + 1); target < total_weight().
  /// `on_block(first, last)` is told the slot range before it is scanned.
  template <class OnBlock>
  std::size_t find(std::uint64_t target, std::span<const std::uint64_t> weights,
                   OnBlock&& on_block) const {
    const std::size_t base = descend(target, 0) * kBlock;
    const std::size_t end = std::min(base + kBlock, size_);
    on_block(base, end);
    std::size_t skip = 0;
    std::uint64_t acc = 0;
    for (std::size_t j = base; j < end; ++j) {
      acc += weights[j];
      skip += acc <= target ? 1 : 0;
    }
    return base + skip;
  }

  std::size_t find(std::uint64_t target, std::span<const std::uint64_t> weights) const {
    return find(target, weights, [](std::size_t, std::size_t) {});
  }

  template <UniformSource Rng, class OnBlock>
  std::size_t sample(Rng& rng, std::span<const std::uint64_t> weights, OnBlock&& on_block) const {
    if (total_ == 0) throw IntegrityError("sampling from an empty urn");
    return find(rng.below(total_), weights, on_block);
  }

  template <UniformSource Rng>
  std::size_t sample(Rng& rng, std::span<const std::uint64_t> weights) const {
    return sample(rng, weights, [](std::size_t, std::size_t) {});
  }

 private:
  static constexpr std::size_t kFan = 8;

  struct alignas(64) Node {
    std::uint64_t w[kFan] = {};
  };

  std::uint64_t& at(std::size_t l, std::size_t i) { return levels_[l][i / kFan].w[i % kFan]; }
  std::uint64_t at(std::size_t l, std::size_t i) const { return levels_[l][i / kFan].w[i % kFan]; }

  /// Walks from the root down to `stop`, leaving target relative to the
  /// returned entry of that level. Children past the end hold zero, so once
  /// the running sum exceeds the target they are never counted.
  std::size_t descend(std::uint64_t& target, std::size_t stop) const {
    std::size_t i = 0;
    for (std::size_t l = levels_.size(); l-- > stop;) {
      const std::uint64_t* w = levels_[l][i].w;
      std::uint64_t acc = 0, before = 0;
      std::size_t skip = 0;
      for (std::size_t k = 0; k < kFan; ++k) {
        acc += w[k];
        const bool past = acc <= target;
        skip += past ? 1 : 0;
        before = past ? acc : before;
      }
      target -= before;
      i = i * kFan + skip;
    }
    return i;
  }

  void resize_level(std::size_t l, std::size_t entries) {
    levels_[l].resize(std::max<std::size_t>((entries + kFan - 1) / kFan, 1));
  }

  /// Opens block b (all zero), adding a root level when the top overflows.
  void grow(std::size_t b) {
    if (levels_.empty()) {
      levels_.emplace_back(1);
      counts_.assign(1, 0);
    }
    std::size_t i = b;
    for (std::size_t l = 0; l < levels_.size(); ++l, i /= kFan) {
      if (i < counts_[l]) return;
      counts_[l] = i + 1;
      resize_level(l, counts_[l]);
      if (l + 1 == levels_.size() && counts_[l] > kFan) {
        // The old top becomes child 0 of a new root.
        std::uint64_t sum = 0;
        for (std::size_t k = 0; k < kFan; ++k) sum += levels_[l][0].w[k];
        levels_.emplace_back(1);
        levels_.back()[0].w[0] = sum;
        counts_.push_back(1);
      }
    }
  }

  // levels_[0] holds block sums; the last level is the root node.
  std::vector<std::vector<Node>> levels_;
  std::vector<std::size_t> counts_;
  std::size_t size_ = 0;
  std::uint64_t total_ = 0;
};

}  // namespace urnlab
