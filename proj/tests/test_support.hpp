#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

namespace maxlog::testing {

/// `count` distinct 64-bit ids drawn from `rng`.
inline std::vector<std::uint64_t> random_items(std::mt19937_64& rng, std::size_t count) {
  std::set<std::uint64_t> seen;
  std::vector<std::uint64_t> items;
  while (items.size() < count) {
    const auto v = rng();
    if (seen.insert(v).second) items.push_back(v);
  }
  return items;
}

inline std::vector<std::uint64_t> shuffled(std::vector<std::uint64_t> items, std::mt19937_64& rng) {
  std::shuffle(items.begin(), items.end(), rng);
  return items;
}

/// floor(-log2(x / 2^64)) for x >= 1 by scanning for the highest set bit.
// floor(-log2(x / 2^64)) = 64 - ceil(log2 x), by scanning powers of two.
inline int rank_by_scan(std::uint64_t x) {
  int c = 0;
  while (c < 64 && (std::uint64_t{1} << c) < x) ++c;
  return 64 - c;
}

// Leading zero bits of a nonzero word.
inline int leading_zeros_by_scan(std::uint64_t x) {
  int top = 63;
  while (((x >> top) & 1U) == 0) --top;
  return 63 - top;
}

}  // namespace maxlog::testing
