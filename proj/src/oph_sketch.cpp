#include "maxlog/oph_sketch.hpp"

#include <bit>
#include <stdexcept>
#include <string>

#include "maxlog/errors.hpp"
#include "maxlog/maxlog_sketch.hpp"
#include "maxlog/serialization.hpp"

namespace maxlog {

OphSketch::OphSketch(std::size_t k, unsigned w, HashSeed seed) : seed_(seed), hash_(single_hash(seed)) {
  if (k < 1 || !std::has_single_bit(k)) throw ConfigError("OPH register count k must be a power of two");
  if (k > (std::size_t{1} << 31)) throw ConfigError("OPH register count k is too large");
  if (w < 1 || w > 7) throw ConfigError("rank width w must be in 1..7, got " + std::to_string(w));
  bucket_bits_ = static_cast<unsigned>(std::countr_zero(k));
  registers_ = PackedRegisters(k, w);
  filled_bits_.assign((k + 63) / 64, 0);
}

std::pair<std::size_t, std::uint8_t> OphSketch::locate(std::uint64_t item) const noexcept {
  const std::uint64_t h = hash_(item);
  const std::uint64_t low_mask = k() - 1;
  // Forcing the bucket bits to one leaves the leading-zero count of the high
  // bits; an all-zero high part maps to the largest rank, 64 - bucket_bits.
  const std::uint64_t rank_word = h | low_mask;
  const int rank = rank_word == 0 ? 63 : std::countl_zero(rank_word);
  return {static_cast<std::size_t>(h & low_mask), static_cast<std::uint8_t>(rank)};
}

void OphSketch::update(std::uint64_t item) {
  const auto [bucket, rank] = locate(item);
  apply(bucket, rank);
}

void OphSketch::apply(std::size_t bucket, std::uint8_t rank) {
  if (bucket >= k()) throw std::out_of_range("bucket index out of range");
  const std::uint8_t sentinel = registers_.sentinel();
  ++item_count_;
  ++touched_;
  if (filled_at(bucket)) {
    const std::uint8_t current = full_rank(bucket);
    if (rank < current) return;
    if (rank == current) {
      registers_.clear_indicator(bucket);
      return;
    }
  } else {
    filled_bits_[bucket / 64] |= std::uint64_t{1} << (bucket % 64);
    ++filled_;
  }
  if (rank >= sentinel) {
    overflow_[static_cast<std::uint32_t>(bucket)] = rank;
    registers_.set(bucket, true, sentinel);
  } else {
    registers_.set(bucket, true, rank);
  }
}

std::uint8_t OphSketch::full_rank(std::size_t i) const {
  const std::uint8_t code = registers_.code(i);
  if (code != registers_.sentinel()) return code;
  return overflow_.at(static_cast<std::uint32_t>(i));
}

std::pair<bool, std::uint8_t> OphSketch::register_at(std::size_t i) const {
  if (i >= k()) throw std::out_of_range("register index out of range");
  if (!filled_at(i)) throw std::logic_error("register " + std::to_string(i) + " is empty");
  return {registers_.indicator(i), full_rank(i)};
}

std::size_t OphSketch::memory_bits() const noexcept {
  return k() * (width() + 2) + kOverflowEntryBits * overflow_.size();
}

bool OphSketch::compatible_with(const OphSketch& other) const noexcept {
  return k() == other.k() && width() == other.width() && seed_ == other.seed_;
}

bool operator==(const OphSketch& a, const OphSketch& b) {
  return a.compatible_with(b) && a.item_count_ == b.item_count_ && a.registers_ == b.registers_ &&
         a.filled_bits_ == b.filled_bits_ && a.overflow_ == b.overflow_;
}

std::vector<std::uint8_t> OphSketch::serialize() const {
  ByteWriter out;
  out.header({SketchTag::oph, static_cast<std::uint8_t>(width()), static_cast<std::uint32_t>(k()), seed_.value,
              item_count_});
  const auto words = registers_.words();
  out.u32(static_cast<std::uint32_t>(words.size()));
  for (auto word : words) out.u64(word);
  out.u32(static_cast<std::uint32_t>(filled_bits_.size()));
  for (auto word : filled_bits_) out.u64(word);
  out.u32(static_cast<std::uint32_t>(overflow_.size()));
  for (const auto& [index, rank] : overflow_) {
    out.u32(index);
    out.u8(rank);
  }
  return out.take();
}

OphSketch OphSketch::deserialize(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  const auto header = in.header(SketchTag::oph);
  OphSketch sketch(header.k, header.width, HashSeed{header.seed});
  sketch.item_count_ = header.item_count;
  auto words = sketch.registers_.words();
  if (in.u32() != words.size()) throw ParseError(0, "register word count does not match k and w");
  for (auto& word : words) word = in.u64();
  if (in.u32() != sketch.filled_bits_.size()) throw ParseError(0, "bucket bitmap size does not match k");
  for (auto& word : sketch.filled_bits_) {
    word = in.u64();
    sketch.filled_ += static_cast<std::size_t>(std::popcount(word));
  }
  const auto entries = in.u32();
  for (std::uint32_t e = 0; e < entries; ++e) {
    const auto index = in.u32();
    const auto rank = in.u8();
    if (index >= header.k || rank < sketch.registers_.sentinel() ||
        sketch.registers_.code(index) != sketch.registers_.sentinel()) {
      throw ParseError(0, "overflow entry does not match a sentinel register");
    }
    sketch.overflow_[index] = rank;
  }
  in.expect_done();
  return sketch;
}

JaccardEstimate oph_estimate_jaccard(const OphSketch& a, const OphSketch& b) {
  if (!a.compatible_with(b)) throw IncompatibleSketchError("OPH sketches differ in k, w or seed");
  if (a.filled() == 0 || b.filled() == 0) throw EmptySketchError("cannot estimate similarity of an empty OPH sketch");

  const auto fa = a.filled_words();
  const auto fb = b.filled_words();
  std::vector<std::uint64_t> joint(fa.size());
  std::vector<std::uint64_t> only_a(fa.size());
  std::vector<std::uint64_t> only_b(fa.size());
  std::size_t usable = 0;
  for (std::size_t w = 0; w < fa.size(); ++w) {
    joint[w] = fa[w] & fb[w];
    only_a[w] = fa[w] & ~fb[w];
    only_b[w] = fb[w] & ~fa[w];
    usable += static_cast<std::size_t>(std::popcount(fa[w] | fb[w]));
  }
  // A bucket empty on one side holds only items unique to the other, whose
  // maximum counts when it is unique.
  std::size_t k_hat = a.packed().count_indicators(only_a) + b.packed().count_indicators(only_b);
  k_hat += a.packed().count_unique_max_disagreements(b.packed(), joint);
  // Lanes where both codes are the sentinel compared as equal; settle them
  // with the stored ranks.
  for (const auto& [index, rank_a] : a.overflow()) {
    const auto it = b.overflow().find(index);
    if (it == b.overflow().end() || !((joint[index / 64] >> (index % 64)) & 1U)) continue;
    const std::uint8_t rank_b = it->second;
    if (rank_a > rank_b && a.packed().indicator(index)) ++k_hat;
    if (rank_b > rank_a && b.packed().indicator(index)) ++k_hat;
  }
  return maxlog_estimate_from_count(k_hat, usable);
}

}  // namespace maxlog
