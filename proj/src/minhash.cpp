#include "maxlog/minhash.hpp"

#include <algorithm>
#include <limits>

#include "maxlog/errors.hpp"
#include "maxlog/serialization.hpp"

namespace maxlog {

MinHashSketch::MinHashSketch(std::size_t k, HashSeed seed) {
  if (k < 1) throw ConfigError("register count k must be at least 1");
  if (k > 0xffffffffULL) throw ConfigError("register count k must fit in 32 bits");
  family_ = HashFamily::make(seed, k);
  minima_.assign(k, std::numeric_limits<std::uint64_t>::max());
}

MinHashSketch::MinHashSketch(std::shared_ptr<const HashFamily> family) : family_(std::move(family)) {
  if (!family_ || family_->size() < 1) throw ConfigError("MinHash needs a non-empty hash family");
  minima_.assign(family_->size(), std::numeric_limits<std::uint64_t>::max());
}

void MinHashSketch::update(std::uint64_t item) {
  const SeededHash* hashes = family_->data();
  const std::size_t k = minima_.size();
  std::uint64_t* minima = minima_.data();
  for (std::size_t i = 0; i < k; ++i) minima[i] = std::min(minima[i], hashes[i](item));
  ++item_count_;
}

bool MinHashSketch::compatible_with(const MinHashSketch& other) const noexcept {
  return k() == other.k() && seed() == other.seed();
}

bool operator==(const MinHashSketch& a, const MinHashSketch& b) {
  return a.compatible_with(b) && a.item_count_ == b.item_count_ && a.minima_ == b.minima_;
}

std::vector<std::uint8_t> MinHashSketch::serialize() const {
  ByteWriter out;
  out.header({SketchTag::minhash, 0, static_cast<std::uint32_t>(k()), seed().value, item_count_});
  for (auto m : minima_) out.u64(m);
  return out.take();
}

MinHashSketch MinHashSketch::deserialize(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  const auto header = in.header(SketchTag::minhash);
  MinHashSketch sketch(header.k, HashSeed{header.seed});
  sketch.item_count_ = header.item_count;
  for (auto& m : sketch.minima_) m = in.u64();
  in.expect_done();
  return sketch;
}

JaccardEstimate minhash_estimate(const MinHashSketch& a, const MinHashSketch& b) {
  if (!a.compatible_with(b)) throw IncompatibleSketchError("MinHash sketches differ in k or seed");
  if (a.empty() || b.empty()) throw EmptySketchError("cannot estimate similarity of an empty MinHash sketch");
  const auto ma = a.minima();
  const auto mb = b.minima();
  std::size_t matches = 0;
  for (std::size_t i = 0; i < ma.size(); ++i) matches += static_cast<std::size_t>(ma[i] == mb[i]);

  JaccardEstimate result;
  result.k_hat = matches;
  result.registers_used = a.k();
  result.raw = static_cast<double>(matches) / static_cast<double>(a.k());
  result.estimate = result.raw;
  result.variance_hint = result.estimate * (1.0 - result.estimate) / static_cast<double>(a.k());
  return result;
}

}  // namespace maxlog
