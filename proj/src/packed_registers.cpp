#include "maxlog/packed_registers.hpp"

#include <bit>

#include "maxlog/errors.hpp"

namespace maxlog {

PackedRegisters::PackedRegisters(std::size_t count, unsigned rank_bits)
    : count_(count), rank_bits_(rank_bits) {
  if (rank_bits < 1 || rank_bits > 7) throw ConfigError("rank width must be in 1..7 bits");
  lanes_per_word_ = 64 / lane_bits();
  rank_mask_ = (std::uint64_t{1} << rank_bits) - 1;
  for (unsigned lane = 0; lane < lanes_per_word_; ++lane) {
    word_rank_mask_ |= rank_mask_ << (lane * lane_bits());
    word_indicator_mask_ |= std::uint64_t{1} << (lane * lane_bits() + rank_bits);
  }
  words_.assign((count + lanes_per_word_ - 1) / lanes_per_word_, 0);
}

namespace {

// Indicator-position bits of the lanes where the larger code has its
// indicator set. Per lane, 2^w + ra - rb stays in (0, 2^(w+1)) so no borrow
// crosses lanes; its top bit is set iff ra >= rb.
inline std::uint64_t unique_max_hits(std::uint64_t a, std::uint64_t b, std::uint64_t ranks,
                                     std::uint64_t high) noexcept {
  const std::uint64_t ra = a & ranks;
  const std::uint64_t rb = b & ranks;
  const std::uint64_t a_ge = ((ra | high) - rb) & high;
  const std::uint64_t b_ge = ((rb | high) - ra) & high;
  return (a_ge & ~b_ge & a) | (b_ge & ~a_ge & b);
}

}  // namespace

std::size_t PackedRegisters::count_unique_max_disagreements(const PackedRegisters& other) const noexcept {
  std::size_t total = 0;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    total += static_cast<std::size_t>(
        std::popcount(unique_max_hits(words_[w], other.words_[w], word_rank_mask_, word_indicator_mask_)));
  }
  return total;
}

std::uint64_t PackedRegisters::indicator_mask(std::span<const std::uint64_t> lane_bitmap, std::size_t w) const noexcept {
  const unsigned lanes = lanes_per_word_;
  const std::size_t first = w * lanes;
  const std::size_t bit = first % 64;
  std::uint64_t chunk = lane_bitmap[first / 64] >> bit;
  if (bit + lanes > 64 && first / 64 + 1 < lane_bitmap.size()) chunk |= lane_bitmap[first / 64 + 1] << (64 - bit);
  chunk &= (std::uint64_t{1} << lanes) - 1;
  std::uint64_t mask = 0;
  while (chunk != 0) {
    mask |= std::uint64_t{1} << (static_cast<unsigned>(std::countr_zero(chunk)) * lane_bits() + rank_bits_);
    chunk &= chunk - 1;
  }
  return mask;
}

std::size_t PackedRegisters::count_unique_max_disagreements(const PackedRegisters& other,
                                                            std::span<const std::uint64_t> lane_bitmap) const noexcept {
  std::size_t total = 0;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    const std::uint64_t mask = indicator_mask(lane_bitmap, w);
    if (mask == 0) continue;
    total += static_cast<std::size_t>(
        std::popcount(mask & unique_max_hits(words_[w], other.words_[w], word_rank_mask_, word_indicator_mask_)));
  }
  return total;
}

std::size_t PackedRegisters::count_indicators(std::span<const std::uint64_t> lane_bitmap) const noexcept {
  std::size_t total = 0;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    const std::uint64_t mask = indicator_mask(lane_bitmap, w);
    if (mask != 0) total += static_cast<std::size_t>(std::popcount(mask & words_[w]));
  }
  return total;
}

}  // namespace maxlog
