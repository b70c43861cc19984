#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "maxlog/estimation.hpp"
#include "maxlog/hashing.hpp"
#include "maxlog/jaccard_estimate.hpp"
#include "maxlog/packed_registers.hpp"

namespace maxlog {

using analysis::kAlpha;

/// Bits charged per overflow-table entry in memory reports.
inline constexpr std::size_t kOverflowEntryBits = 96;

inline constexpr unsigned kDefaultRankWidth = 6;

/// Full (untruncated) view of one register.
struct MaxLogRegister {
  bool indicator = false;
  std::uint8_t max_rank = 0;

  friend bool operator==(MaxLogRegister, MaxLogRegister) = default;
};

/// MaxLogHash sketch of one streaming set.
///
/// Register i keeps the maximum log-rank under hash i and a bit telling
/// whether exactly one item reached it. Ranks that do not fit in `w` bits
/// live in an exact per-sketch overflow table; the in-array code is then
/// the all-ones sentinel. A sketch that has seen no item is empty as a
/// whole, because every update touches every register.
///
/// Items must be distinct: re-applying an item clears indicators that
/// should stay set. Deduplicate upstream.
class MaxLogSketch {
 public:
  MaxLogSketch(std::size_t k, unsigned w, HashSeed seed);
  MaxLogSketch(std::shared_ptr<const HashFamily> family, unsigned w);

  static MaxLogSketch from_items(std::span<const std::uint64_t> items, std::size_t k, unsigned w, HashSeed seed);
  static MaxLogSketch from_items(std::span<const std::uint64_t> items, std::shared_ptr<const HashFamily> family,
                                 unsigned w);

  void update(std::uint64_t item);
  /// Applies one item given its precomputed rank under every hash
  /// (ranks.size() == k). update() is apply_ranks of the hashed ranks.
  void apply_ranks(std::span<const std::uint8_t> ranks);

  std::size_t k() const noexcept { return registers_.size(); }
  unsigned width() const noexcept { return registers_.rank_bits(); }
  HashSeed seed() const noexcept { return family_->seed(); }
  std::uint64_t item_count() const noexcept { return item_count_; }
  bool empty() const noexcept { return item_count_ == 0; }
  const HashFamily& family() const noexcept { return *family_; }
  const std::shared_ptr<const HashFamily>& shared_family() const noexcept { return family_; }

  MaxLogRegister register_at(std::size_t i) const;
  const std::map<std::uint32_t, std::uint8_t>& overflow() const noexcept { return overflow_; }
  const PackedRegisters& packed() const noexcept { return registers_; }

  /// k (w + 1) + 96 per overflow entry.
  std::size_t memory_bits() const noexcept;

  /// Cumulative number of register visits by update(); k per item.
  std::uint64_t registers_touched() const noexcept { return touched_; }

  bool compatible_with(const MaxLogSketch& other) const noexcept;

  std::vector<std::uint8_t> serialize() const;
  static MaxLogSketch deserialize(std::span<const std::uint8_t> bytes);

  /// Equal state: same configuration, item count, registers and overflow.
  friend bool operator==(const MaxLogSketch& a, const MaxLogSketch& b);

 private:
  template <class RankOf>
  void apply_item(RankOf rank_of);
  std::uint8_t full_rank(std::size_t i, std::uint8_t code) const;

  std::shared_ptr<const HashFamily> family_;
  PackedRegisters registers_;
  std::map<std::uint32_t, std::uint8_t> overflow_;
  std::uint64_t item_count_ = 0;
  std::uint64_t touched_ = 0;
};

/// raw = 1 - k_hat / (k alpha), clamped to [0, 1].
/// Throws IncompatibleSketchError or EmptySketchError.
JaccardEstimate estimate_jaccard(const MaxLogSketch& a, const MaxLogSketch& b);

/// Shared estimator tail for MaxLog-type statistics.
JaccardEstimate maxlog_estimate_from_count(std::size_t k_hat, std::size_t registers_used);

}  // namespace maxlog
