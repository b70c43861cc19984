#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "maxlog/hashing.hpp"

namespace maxlog {

enum class PairMode { balanced, unbalanced };

std::string_view to_string(PairMode mode) noexcept;
std::optional<PairMode> parse_pair_mode(std::string_view name) noexcept;

/// Synthetic set pair over the 32-bit universe.
///   balanced:   |A| = |B| = n, |A n B| = round(2nJ / (1 + J))
///   unbalanced: B is a subset of A with |B| = round(Jn)
struct SetPairParams {
  PairMode mode = PairMode::balanced;
  std::uint64_t n = 10000;
  double jaccard = 0.9;
  HashSeed seed{};
};

struct SetPair {
  std::vector<std::uint64_t> a;
  std::vector<std::uint64_t> b;
  std::size_t intersection = 0;
  std::size_t union_size = 0;
  /// Realized |A n B| / |A u B| from set arithmetic, not the requested J.
  double exact_jaccard = 0.0;
};

/// Throws ConfigError for n == 0 or J outside [0, 1] and CapacityError when
/// the pair needs more distinct elements than the universe holds.
SetPair generate_pair(const SetPairParams& params);

/// Intersection and union sizes of two sets given as arbitrary-order
/// vectors of distinct values.
struct SetOverlap {
  std::size_t intersection = 0;
  std::size_t union_size = 0;
  double jaccard() const noexcept {
    return union_size == 0 ? 1.0 : static_cast<double>(intersection) / static_cast<double>(union_size);
  }
};

SetOverlap exact_overlap(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b);

}  // namespace maxlog
