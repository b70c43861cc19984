#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "maxlog/hashing.hpp"
#include "maxlog/jaccard_estimate.hpp"
#include "maxlog/packed_registers.hpp"

namespace maxlog {

/// One-permutation MaxLog sketch (MaxLogOPH).
///
/// A single 64-bit hash picks the bucket from its low log2(k) bits and the
/// log-rank from the remaining high bits, so each item touches exactly one
/// register. Buckets that never received an item are tracked in a bitmap;
/// estimation skips buckets empty in both sketches. k must be a power of two.
class OphSketch {
 public:
  OphSketch(std::size_t k, unsigned w, HashSeed seed);

  void update(std::uint64_t item);
  /// Applies an item with a chosen bucket and rank (same branch logic as
  /// update); for tests and hand traces.
  void apply(std::size_t bucket, std::uint8_t rank);

  std::size_t k() const noexcept { return registers_.size(); }
  unsigned width() const noexcept { return registers_.rank_bits(); }
  HashSeed seed() const noexcept { return seed_; }
  std::uint64_t item_count() const noexcept { return item_count_; }
  std::size_t filled() const noexcept { return filled_; }
  bool filled_at(std::size_t i) const noexcept { return (filled_bits_[i / 64] >> (i % 64)) & 1U; }

  /// Register i as (indicator, full rank); throws if the bucket is empty.
  std::pair<bool, std::uint8_t> register_at(std::size_t i) const;
  const std::map<std::uint32_t, std::uint8_t>& overflow() const noexcept { return overflow_; }
  const PackedRegisters& packed() const noexcept { return registers_; }
  std::span<const std::uint64_t> filled_words() const noexcept { return filled_bits_; }

  /// Bucket and rank that `item` maps to.
  std::pair<std::size_t, std::uint8_t> locate(std::uint64_t item) const noexcept;

  /// k (w + 1) register bits + k empty-flag bits + 96 per overflow entry.
  std::size_t memory_bits() const noexcept;

  /// Cumulative number of register visits by update(); one per item.
  std::uint64_t registers_touched() const noexcept { return touched_; }

  bool compatible_with(const OphSketch& other) const noexcept;

  std::vector<std::uint8_t> serialize() const;
  static OphSketch deserialize(std::span<const std::uint8_t> bytes);

  friend bool operator==(const OphSketch& a, const OphSketch& b);

 private:
  std::uint8_t full_rank(std::size_t i) const;

  HashSeed seed_;
  SeededHash hash_;
  unsigned bucket_bits_ = 0;
  PackedRegisters registers_;
  std::vector<std::uint64_t> filled_bits_;
  std::map<std::uint32_t, std::uint8_t> overflow_;
  std::size_t filled_ = 0;
  std::uint64_t item_count_ = 0;
  std::uint64_t touched_ = 0;
};

/// MaxLog estimator over the k' buckets non-empty in at least one sketch:
/// raw = 1 - k_hat / (k' alpha). A bucket filled on one side only counts
/// toward k_hat when that side's indicator is set. registers_used reports k'.
/// Throws IncompatibleSketchError or EmptySketchError (a sketch has no items).
JaccardEstimate oph_estimate_jaccard(const OphSketch& a, const OphSketch& b);

}  // namespace maxlog
