#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace maxlog {

/// Standard Bloom filter over 64-bit keys, probing with double hashing.
class BloomFilter {
 public:
  /// Sized for `expected_items` insertions at false-positive rate `fp_rate`:
  /// bits = -n ln p / ln^2 2, hashes = round(bits / n * ln 2).
  BloomFilter(std::size_t expected_items, double fp_rate);

  /// Inserts the key; returns true if it was (probably) absent before.
  /// Never returns true for a key inserted earlier.
  bool insert(std::uint64_t key);
  bool possibly_contains(std::uint64_t key) const;

  std::size_t bit_count() const noexcept { return bits_; }
  unsigned hash_count() const noexcept { return hashes_; }
  std::size_t inserted() const noexcept { return inserted_; }

 private:
  std::size_t bits_ = 0;
  unsigned hashes_ = 0;
  std::size_t inserted_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace maxlog
