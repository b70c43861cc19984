#include "maxlog/hyperloglog.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "maxlog/errors.hpp"
#include "maxlog/serialization.hpp"

namespace maxlog {

double hll_alpha(std::size_t m) {
  switch (m) {
    case 16: return 0.673;
    case 32: return 0.697;
    case 64: return 0.709;
    default: return 0.7213 / (1.0 + 1.079 / static_cast<double>(m));
  }
}

HllSketch::HllSketch(std::size_t m, HashSeed seed) : seed_(seed), hash_(single_hash(seed)) {
  if (m < 16) throw ConfigError("HyperLogLog needs at least 16 registers");
  if (m > 0xffffffffULL) throw ConfigError("HyperLogLog register count must fit in 32 bits");
  registers_.assign(m, 0);
}

void HllSketch::update(std::uint64_t item) {
  const std::uint64_t h = hash_(item);
  const std::size_t index = static_cast<std::size_t>(((h >> 32) * registers_.size()) >> 32);
  const auto low = static_cast<std::uint32_t>(h);
  const auto rank = static_cast<std::uint8_t>(std::min<int>(std::countl_zero(low) + 1, kMaxRank));
  registers_[index] = std::max(registers_[index], rank);
  ++item_count_;
}

void HllSketch::merge(const HllSketch& other) {
  if (!compatible_with(other)) throw IncompatibleSketchError("HyperLogLog sketches differ in m or seed");
  for (std::size_t i = 0; i < registers_.size(); ++i) registers_[i] = std::max(registers_[i], other.registers_[i]);
  item_count_ += other.item_count_;
}

double HllSketch::cardinality() const {
  const double m = static_cast<double>(registers_.size());
  double sum = 0.0;
  std::size_t zeros = 0;
  for (auto r : registers_) {
    sum += std::ldexp(1.0, -static_cast<int>(r));
    zeros += static_cast<std::size_t>(r == 0);
  }
  double estimate = hll_alpha(registers_.size()) * m * m / sum;
  constexpr double two32 = 4294967296.0;
  if (estimate <= 2.5 * m) {
    if (zeros > 0) estimate = m * std::log(m / static_cast<double>(zeros));
  } else if (estimate > two32 / 30.0) {
    estimate = -two32 * std::log1p(-estimate / two32);
  }
  return estimate;
}

bool HllSketch::compatible_with(const HllSketch& other) const noexcept {
  return m() == other.m() && seed_ == other.seed_;
}

bool operator==(const HllSketch& a, const HllSketch& b) {
  return a.compatible_with(b) && a.item_count_ == b.item_count_ && a.registers_ == b.registers_;
}

std::vector<std::uint8_t> HllSketch::serialize() const {
  ByteWriter out;
  out.header({SketchTag::hll, static_cast<std::uint8_t>(kRegisterBits), static_cast<std::uint32_t>(m()), seed_.value,
              item_count_});
  out.raw(registers_);
  return out.take();
}

HllSketch HllSketch::deserialize(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  const auto header = in.header(SketchTag::hll);
  HllSketch sketch(header.k, HashSeed{header.seed});
  sketch.item_count_ = header.item_count;
  const auto regs = in.raw(header.k);
  for (std::size_t i = 0; i < regs.size(); ++i) {
    if (regs[i] > kMaxRank) throw ParseError(0, "HyperLogLog register exceeds 5 bits");
    sketch.registers_[i] = regs[i];
  }
  in.expect_done();
  return sketch;
}

HllSketch hll_merge(const HllSketch& a, const HllSketch& b) {
  HllSketch merged = a;
  merged.merge(b);
  return merged;
}

JaccardEstimate hll_jaccard(const HllSketch& a, const HllSketch& b) {
  const HllSketch merged = hll_merge(a, b);
  const double union_card = merged.cardinality();
  if (!(union_card > 0.0)) throw EmptySketchError("HyperLogLog union estimate is zero");
  JaccardEstimate result;
  result.registers_used = a.m();
  result.raw = (a.cardinality() + b.cardinality() - union_card) / union_card;
  result.estimate = JaccardEstimate::clamp_unit(result.raw);
  return result;
}

}  // namespace maxlog
