#include "maxlog/maxlog_sketch.hpp"

#include <stdexcept>
#include <string>

#include "maxlog/errors.hpp"
#include "maxlog/serialization.hpp"

namespace maxlog {

namespace {

void check_config(std::size_t k, unsigned w) {
  if (k < 1) throw ConfigError("register count k must be at least 1");
  if (k > 0xffffffffULL) throw ConfigError("register count k must fit in 32 bits");
  if (w < 1 || w > 7) throw ConfigError("rank width w must be in 1..7, got " + std::to_string(w));
}

}  // namespace

MaxLogSketch::MaxLogSketch(std::size_t k, unsigned w, HashSeed seed) {
  check_config(k, w);
  family_ = HashFamily::make(seed, k);
  registers_ = PackedRegisters(k, w);
}

MaxLogSketch::MaxLogSketch(std::shared_ptr<const HashFamily> family, unsigned w) : family_(std::move(family)) {
  if (!family_) throw ConfigError("hash family must not be null");
  check_config(family_->size(), w);
  registers_ = PackedRegisters(family_->size(), w);
}

MaxLogSketch MaxLogSketch::from_items(std::span<const std::uint64_t> items, std::size_t k, unsigned w,
                                      HashSeed seed) {
  MaxLogSketch sketch(k, w, seed);
  for (auto item : items) sketch.update(item);
  return sketch;
}

MaxLogSketch MaxLogSketch::from_items(std::span<const std::uint64_t> items,
                                      std::shared_ptr<const HashFamily> family, unsigned w) {
  MaxLogSketch sketch(std::move(family), w);
  for (auto item : items) sketch.update(item);
  return sketch;
}

template <class RankOf>
void MaxLogSketch::apply_item(RankOf rank_of) {
  const std::size_t k = this->k();
  const unsigned lane_bits = registers_.lane_bits();
  const unsigned rank_bits = registers_.rank_bits();
  const unsigned per_word = registers_.lanes_per_word();
  const std::uint64_t sentinel = registers_.sentinel();
  const std::uint64_t lane_mask = (std::uint64_t{1} << lane_bits) - 1;
  const std::uint64_t indicator = std::uint64_t{1} << rank_bits;
  const bool first = item_count_ == 0;
  auto words = registers_.words();

  std::size_t i = 0;
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::uint64_t word = words[w];
    for (unsigned lane = 0; lane < per_word && i < k; ++lane, ++i) {
      const unsigned shift = lane * lane_bits;
      const std::uint64_t rank = rank_of(i);
      if (!first) {
        const std::uint64_t code = (word >> shift) & sentinel;
        if (code != sentinel) {
          if (rank < code) continue;
          if (rank == code) {
            word &= ~(indicator << shift);
            continue;
          }
        } else {
          auto& stored = overflow_[static_cast<std::uint32_t>(i)];
          if (rank < stored) continue;
          if (rank == stored) {
            word &= ~(indicator << shift);
          } else {
            stored = static_cast<std::uint8_t>(rank);
            word |= indicator << shift;
          }
          continue;
        }
      }
      std::uint64_t code = rank;
      if (rank >= sentinel) {
        overflow_[static_cast<std::uint32_t>(i)] = static_cast<std::uint8_t>(rank);
        code = sentinel;
      }
      word = (word & ~(lane_mask << shift)) | ((indicator | code) << shift);
    }
    words[w] = word;
  }
  ++item_count_;
  touched_ += k;
}

void MaxLogSketch::update(std::uint64_t item) {
  const SeededHash* hashes = family_->data();
  apply_item([hashes, item](std::size_t i) -> std::uint64_t { return hashes[i].log_rank(item).rank; });
}

void MaxLogSketch::apply_ranks(std::span<const std::uint8_t> ranks) {
  if (ranks.size() != k()) throw ConfigError("apply_ranks needs exactly one rank per register");
  apply_item([ranks](std::size_t i) -> std::uint64_t { return ranks[i]; });
}

std::uint8_t MaxLogSketch::full_rank(std::size_t i, std::uint8_t code) const {
  if (code != registers_.sentinel()) return code;
  return overflow_.at(static_cast<std::uint32_t>(i));
}

MaxLogRegister MaxLogSketch::register_at(std::size_t i) const {
  if (i >= k()) throw std::out_of_range("register index out of range");
  return {registers_.indicator(i), full_rank(i, registers_.code(i))};
}

std::size_t MaxLogSketch::memory_bits() const noexcept {
  return k() * (width() + 1) + kOverflowEntryBits * overflow_.size();
}

bool MaxLogSketch::compatible_with(const MaxLogSketch& other) const noexcept {
  return k() == other.k() && width() == other.width() && seed() == other.seed();
}

bool operator==(const MaxLogSketch& a, const MaxLogSketch& b) {
  return a.compatible_with(b) && a.item_count_ == b.item_count_ && a.registers_ == b.registers_ &&
         a.overflow_ == b.overflow_;
}

std::vector<std::uint8_t> MaxLogSketch::serialize() const {
  ByteWriter out;
  out.header({SketchTag::maxlog, static_cast<std::uint8_t>(width()), static_cast<std::uint32_t>(k()), seed().value,
              item_count_});
  const auto words = registers_.words();
  out.u32(static_cast<std::uint32_t>(words.size()));
  for (auto word : words) out.u64(word);
  out.u32(static_cast<std::uint32_t>(overflow_.size()));
  for (const auto& [index, rank] : overflow_) {
    out.u32(index);
    out.u8(rank);
  }
  return out.take();
}

MaxLogSketch MaxLogSketch::deserialize(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  const auto header = in.header(SketchTag::maxlog);
  MaxLogSketch sketch(header.k, header.width, HashSeed{header.seed});
  sketch.item_count_ = header.item_count;
  auto words = sketch.registers_.words();
  if (in.u32() != words.size()) throw ParseError(0, "register word count does not match k and w");
  for (auto& word : words) word = in.u64();
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

JaccardEstimate maxlog_estimate_from_count(std::size_t k_hat, std::size_t registers_used) {
  JaccardEstimate result;
  result.k_hat = k_hat;
  result.registers_used = registers_used;
  result.raw = 1.0 - static_cast<double>(k_hat) / (static_cast<double>(registers_used) * kAlpha);
  result.estimate = JaccardEstimate::clamp_unit(result.raw);
  result.variance_hint =
      (1.0 - result.estimate) * (result.estimate + analysis::kVarianceOffset) / static_cast<double>(registers_used);
  return result;
}

JaccardEstimate estimate_jaccard(const MaxLogSketch& a, const MaxLogSketch& b) {
  if (!a.compatible_with(b)) throw IncompatibleSketchError("MaxLog sketches differ in k, w or seed");
  if (a.empty() || b.empty()) throw EmptySketchError("cannot estimate similarity of an empty MaxLog sketch");

  std::size_t k_hat = a.packed().count_unique_max_disagreements(b.packed());

  // Registers where both sides hold the sentinel were counted as equal.
  if (!a.overflow().empty() && !b.overflow().empty()) {
    for (const auto& [index, rank_a] : a.overflow()) {
      const auto it = b.overflow().find(index);
      if (it == b.overflow().end()) continue;
      const std::uint8_t rank_b = it->second;
      if (rank_a > rank_b && a.packed().indicator(index)) ++k_hat;
      if (rank_b > rank_a && b.packed().indicator(index)) ++k_hat;
    }
  }
  return maxlog_estimate_from_count(k_hat, a.k());
}

SketchTag peek_sketch_tag(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8) throw ParseError(0, "truncated sketch data");
  for (std::size_t i = 0; i < kSketchMagic.size(); ++i) {
    if (bytes[i] != static_cast<std::uint8_t>(kSketchMagic[i])) throw ParseError(0, "bad sketch magic");
  }
  const auto tag = bytes[6];
  if (tag < 1 || tag > 4) throw ParseError(0, "unknown sketch type tag");
  return static_cast<SketchTag>(tag);
}

}  // namespace maxlog
