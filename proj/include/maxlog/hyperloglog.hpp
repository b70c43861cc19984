#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "maxlog/hashing.hpp"
#include "maxlog/jaccard_estimate.hpp"

namespace maxlog {

/// HyperLogLog with m 5-bit registers.
///
/// The high 32 hash bits choose the register by multiply-shift, so m need
/// not be a power of two (m >= 16); the low 32 bits give the rank as the
/// position of the first one bit, capped at 31. Cardinality uses the
/// classical raw estimate with linear counting below 2.5 m and the 2^32
/// large-range correction.
class HllSketch {
 public:
  static constexpr std::uint8_t kMaxRank = 31;
  static constexpr std::size_t kRegisterBits = 5;

  HllSketch(std::size_t m, HashSeed seed);

  void update(std::uint64_t item);
  /// Register-wise max; throws IncompatibleSketchError on (m, seed) mismatch.
  void merge(const HllSketch& other);

  double cardinality() const;

  std::size_t m() const noexcept { return registers_.size(); }
  HashSeed seed() const noexcept { return seed_; }
  std::uint64_t item_count() const noexcept { return item_count_; }
  std::span<const std::uint8_t> registers() const noexcept { return registers_; }

  std::size_t memory_bits() const noexcept { return m() * kRegisterBits; }

  bool compatible_with(const HllSketch& other) const noexcept;

  std::vector<std::uint8_t> serialize() const;
  static HllSketch deserialize(std::span<const std::uint8_t> bytes);

  friend bool operator==(const HllSketch& a, const HllSketch& b);

 private:
  HashSeed seed_;
  SeededHash hash_;
  std::vector<std::uint8_t> registers_;
  std::uint64_t item_count_ = 0;
};

/// Bias constant alpha_m of the raw HyperLogLog estimate.
double hll_alpha(std::size_t m);

HllSketch hll_merge(const HllSketch& a, const HllSketch& b);

/// (|A| + |B| - |A u B|) / |A u B| from three cardinality estimates, the
/// union coming from the merged sketch. Throws EmptySketchError when the
/// union estimate is 0.
JaccardEstimate hll_jaccard(const HllSketch& a, const HllSketch& b);

}  // namespace maxlog
