#include "maxlog/bloom_filter.hpp"

#include <algorithm>
#include <cmath>

#include "maxlog/errors.hpp"
#include "maxlog/hashing.hpp"

namespace maxlog {

BloomFilter::BloomFilter(std::size_t expected_items, double fp_rate) {
  if (!(fp_rate > 0.0 && fp_rate < 1.0)) throw ConfigError("Bloom filter false-positive rate must be in (0, 1)");
  const double n = static_cast<double>(std::max<std::size_t>(expected_items, 1));
  const double ln2 = std::log(2.0);
  const double bits = std::ceil(-n * std::log(fp_rate) / (ln2 * ln2));
  bits_ = std::max<std::size_t>(64, static_cast<std::size_t>(bits));
  hashes_ = static_cast<unsigned>(std::clamp(std::lround(static_cast<double>(bits_) / n * ln2), 1L, 32L));
  words_.assign((bits_ + 63) / 64, 0);
}

bool BloomFilter::insert(std::uint64_t key) {
  const std::uint64_t h1 = mix64(key ^ 0x243f6a8885a308d3ULL);
  const std::uint64_t h2 = mix64(key ^ 0x13198a2e03707344ULL) | 1U;
  bool fresh = false;
  for (unsigned i = 0; i < hashes_; ++i) {
    const std::uint64_t bit = (h1 + i * h2) % bits_;
    auto& word = words_[bit / 64];
    const std::uint64_t mask = std::uint64_t{1} << (bit % 64);
    if (!(word & mask)) {
      fresh = true;
      word |= mask;
    }
  }
  if (fresh) ++inserted_;
  return fresh;
}

bool BloomFilter::possibly_contains(std::uint64_t key) const {
  const std::uint64_t h1 = mix64(key ^ 0x243f6a8885a308d3ULL);
  const std::uint64_t h2 = mix64(key ^ 0x13198a2e03707344ULL) | 1U;
  for (unsigned i = 0; i < hashes_; ++i) {
    const std::uint64_t bit = (h1 + i * h2) % bits_;
    if (!(words_[bit / 64] & (std::uint64_t{1} << (bit % 64)))) return false;
  }
  return true;
}

}  // namespace maxlog
