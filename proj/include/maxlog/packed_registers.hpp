#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace maxlog {

/// Array of (indicator, rank-code) lanes packed into 64-bit words.
///
/// Each lane is `rank_bits + 1` bits wide: the low `rank_bits` hold the rank
/// code, the next bit holds the indicator. Lanes never straddle a word, so a
/// word holds `64 / (rank_bits + 1)` lanes and the top bits of each word
/// stay zero. The largest code, `sentinel()`, marks a rank stored out of line.
class PackedRegisters {
 public:
  PackedRegisters() = default;
  PackedRegisters(std::size_t count, unsigned rank_bits);

  std::size_t size() const noexcept { return count_; }
  unsigned rank_bits() const noexcept { return rank_bits_; }
  unsigned lane_bits() const noexcept { return rank_bits_ + 1; }
  unsigned lanes_per_word() const noexcept { return lanes_per_word_; }
  std::uint8_t sentinel() const noexcept { return static_cast<std::uint8_t>(rank_mask_); }

  std::uint8_t code(std::size_t i) const noexcept {
    return static_cast<std::uint8_t>(lane(i) & rank_mask_);
  }
  bool indicator(std::size_t i) const noexcept { return (lane(i) >> rank_bits_) & 1U; }

  void set(std::size_t i, bool indicator, std::uint8_t code) noexcept {
    const auto [w, shift] = locate(i);
    const std::uint64_t lane_mask = ((std::uint64_t{1} << lane_bits()) - 1) << shift;
    const std::uint64_t value = (static_cast<std::uint64_t>(indicator) << rank_bits_) | code;
    words_[w] = (words_[w] & ~lane_mask) | (value << shift);
  }
  void clear_indicator(std::size_t i) noexcept {
    const auto [w, shift] = locate(i);
    words_[w] &= ~(std::uint64_t{1} << (shift + rank_bits_));
  }

  /// Number of lanes where the codes differ and the side holding the larger
  /// code has its indicator set. Lanes where both codes equal the sentinel
  /// are reported as equal; callers resolve them against the true ranks.
  std::size_t count_unique_max_disagreements(const PackedRegisters& other) const noexcept;

  /// Same count restricted to lanes whose bit is set in `lane_bitmap`
  /// (bit i of word i / 64 selects lane i).
  std::size_t count_unique_max_disagreements(const PackedRegisters& other,
                                             std::span<const std::uint64_t> lane_bitmap) const noexcept;

  /// Lanes selected by `lane_bitmap` whose indicator is set.
  std::size_t count_indicators(std::span<const std::uint64_t> lane_bitmap) const noexcept;

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> words() noexcept { return words_; }

  friend bool operator==(const PackedRegisters&, const PackedRegisters&) = default;

 private:
  // Indicator-bit mask of word w's lanes that are selected in lane_bitmap.
  std::uint64_t indicator_mask(std::span<const std::uint64_t> lane_bitmap, std::size_t w) const noexcept;

  struct Location {
    std::size_t word;
    unsigned shift;
  };
  Location locate(std::size_t i) const noexcept {
    return {i / lanes_per_word_, static_cast<unsigned>(i % lanes_per_word_) * lane_bits()};
  }
  std::uint64_t lane(std::size_t i) const noexcept {
    const auto [w, shift] = locate(i);
    return words_[w] >> shift;
  }

  std::size_t count_ = 0;
  unsigned rank_bits_ = 0;
  unsigned lanes_per_word_ = 0;
  std::uint64_t rank_mask_ = 0;
  std::uint64_t word_rank_mask_ = 0;       // rank bits of every lane
  std::uint64_t word_indicator_mask_ = 0;  // indicator bit of every lane
  std::vector<std::uint64_t> words_;
};

}  // namespace maxlog
