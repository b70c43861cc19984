#include "maxlog/hashing.hpp"

namespace maxlog {

HashFamily::HashFamily(HashSeed master, std::size_t count) : seed_(master) {
  members_.reserve(count);
  SeedSequence seq(master);
  for (std::size_t i = 0; i < count; ++i) members_.emplace_back(seq.next());
}

SeededHash single_hash(HashSeed master) noexcept { return SeededHash(SeedSequence(master).next()); }

UnitFraction uniform_hash(HashSeed seed, std::uint64_t item) noexcept {
  return SeededHash(seed.value).uniform(item);
}

LogRank log_rank(HashSeed seed, std::uint64_t item) noexcept { return rank_of(uniform_hash(seed, item)); }

std::uint64_t hash_string(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

}  // namespace maxlog
