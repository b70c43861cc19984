#include "maxlog/set_pairs.hpp"

#include <algorithm>
#include <cmath>

#include "maxlog/errors.hpp"

namespace maxlog {

namespace {

constexpr std::uint64_t kUniverse = std::uint64_t{1} << 32;

// Keyed bijection on 32-bit words; distinct inputs give distinct elements.
class Permutation32 {
 public:
  explicit Permutation32(HashSeed seed) {
    SeedSequence seq(seed);
    k0_ = static_cast<std::uint32_t>(seq.next());
    k1_ = static_cast<std::uint32_t>(seq.next());
    m0_ = static_cast<std::uint32_t>(seq.next()) | 1U;
    m1_ = static_cast<std::uint32_t>(seq.next()) | 1U;
  }

  std::uint32_t operator()(std::uint32_t x) const noexcept {
    x ^= k0_;
    x *= m0_;
    x ^= x >> 16;
    x += k1_;
    x *= m1_;
    x ^= x >> 15;
    x *= 0x2c1b3c6dU;
    x ^= x >> 12;
    return x;
  }

 private:
  std::uint32_t k0_, k1_, m0_, m1_;
};

}  // namespace

std::string_view to_string(PairMode mode) noexcept {
  return mode == PairMode::balanced ? "balanced" : "unbalanced";
}

std::optional<PairMode> parse_pair_mode(std::string_view name) noexcept {
  if (name == "balanced") return PairMode::balanced;
  if (name == "unbalanced") return PairMode::unbalanced;
  return std::nullopt;
}

SetOverlap exact_overlap(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<std::uint64_t> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  return {common.size(), a.size() + b.size() - common.size()};
}

SetPair generate_pair(const SetPairParams& params) {
  if (params.n == 0) throw ConfigError("set pair cardinality n must be at least 1");
  if (!(params.jaccard >= 0.0 && params.jaccard <= 1.0)) throw ConfigError("target Jaccard must be in [0, 1]");
  if (params.n > kUniverse) throw CapacityError("n exceeds the 32-bit universe");

  const double n = static_cast<double>(params.n);
  const std::uint64_t shared = params.mode == PairMode::balanced
                                   ? static_cast<std::uint64_t>(std::llround(2.0 * n * params.jaccard / (1.0 + params.jaccard)))
                                   : static_cast<std::uint64_t>(std::llround(params.jaccard * n));
  const std::uint64_t fresh = params.mode == PairMode::balanced ? params.n - shared : 0;
  if (params.n + fresh > kUniverse) throw CapacityError("set pair needs more distinct elements than the 32-bit universe");

  // A = perm[0, n); B = perm[0, shared) + perm[n, n + fresh).
  const Permutation32 perm(params.seed);
  SetPair pair;
  pair.a.reserve(params.n);
  for (std::uint64_t i = 0; i < params.n; ++i) pair.a.push_back(perm(static_cast<std::uint32_t>(i)));
  pair.b.assign(pair.a.begin(), pair.a.begin() + static_cast<std::ptrdiff_t>(shared));
  for (std::uint64_t i = 0; i < fresh; ++i) pair.b.push_back(perm(static_cast<std::uint32_t>(params.n + i)));

  const auto overlap = exact_overlap(pair.a, pair.b);
  pair.intersection = overlap.intersection;
  pair.union_size = overlap.union_size;
  pair.exact_jaccard = overlap.jaccard();
  return pair;
}

}  // namespace maxlog
