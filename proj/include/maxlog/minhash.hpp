#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "maxlog/hashing.hpp"
#include "maxlog/jaccard_estimate.hpp"

namespace maxlog {

/// Register width used when reporting MinHash memory.
enum class MinHashWidth { bits32 = 32, bits64 = 64 };

/// Classical k-function MinHash over 64-bit hashes.
class MinHashSketch {
 public:
  MinHashSketch(std::size_t k, HashSeed seed);
  explicit MinHashSketch(std::shared_ptr<const HashFamily> family);

  void update(std::uint64_t item);

  std::size_t k() const noexcept { return minima_.size(); }
  HashSeed seed() const noexcept { return family_->seed(); }
  std::uint64_t item_count() const noexcept { return item_count_; }
  bool empty() const noexcept { return item_count_ == 0; }
  std::span<const std::uint64_t> minima() const noexcept { return minima_; }

  /// k registers of the given width; the stored minima are always 64-bit.
  std::size_t memory_bits(MinHashWidth width = MinHashWidth::bits32) const noexcept {
    return k() * static_cast<std::size_t>(width);
  }

  bool compatible_with(const MinHashSketch& other) const noexcept;

  std::vector<std::uint8_t> serialize() const;
  static MinHashSketch deserialize(std::span<const std::uint8_t> bytes);

  friend bool operator==(const MinHashSketch& a, const MinHashSketch& b);

 private:
  std::shared_ptr<const HashFamily> family_;
  std::vector<std::uint64_t> minima_;
  std::uint64_t item_count_ = 0;
};

/// Fraction of matching minima; k_hat reports the match count.
JaccardEstimate minhash_estimate(const MinHashSketch& a, const MinHashSketch& b);

}  // namespace maxlog
