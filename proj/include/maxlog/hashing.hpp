#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

namespace maxlog {

struct HashSeed {
  std::uint64_t value = 42;

  friend bool operator==(HashSeed, HashSeed) = default;
};

// splitmix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

/// Splittable seed stream: the i-th output is the i-th splitmix64 value of
/// the starting state, so any prefix is reproducible from the state alone.
class SeedSequence {
 public:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  constexpr explicit SeedSequence(HashSeed seed) noexcept : state_(seed.value) {}

  constexpr std::uint64_t next() noexcept {
    state_ += kGamma;
    return mix64(state_);
  }

  /// Child seed for a labelled sub-stream (run index, role, ...).
  static constexpr HashSeed derive(HashSeed parent, std::uint64_t label) noexcept {
    return HashSeed{mix64(mix64(parent.value ^ 0x5851f42d4c957f2dULL) + (label + 1) * kGamma)};
  }

 private:
  std::uint64_t state_;
};

/// h(v) = numerator / 2^64 with numerator >= 1.
struct UnitFraction {
  std::uint64_t numerator = 1;

  static constexpr UnitFraction from_word(std::uint64_t word) noexcept {
    return UnitFraction{word == 0 ? 1 : word};
  }
  double value() const noexcept { return static_cast<double>(numerator) * 0x1p-64; }

  friend bool operator==(UnitFraction, UnitFraction) = default;
};

/// floor(-log2 h), in 0..64 for 64-bit fractions.
struct LogRank {
  std::uint8_t rank = 0;

  friend bool operator==(LogRank, LogRank) = default;
};

constexpr LogRank rank_of(UnitFraction h) noexcept {
  // Subtracting one makes exact powers of two land on the floor.
  return LogRank{static_cast<std::uint8_t>(std::countl_zero(h.numerator - 1))};
}

/// One keyed member of the hash family.
class SeededHash {
 public:
  constexpr SeededHash() noexcept = default;
  constexpr explicit SeededHash(std::uint64_t key) noexcept : key_(key) {}

  constexpr std::uint64_t operator()(std::uint64_t item) const noexcept {
    return mix64(mix64(item ^ key_) + key_);
  }
  constexpr UnitFraction uniform(std::uint64_t item) const noexcept {
    return UnitFraction::from_word((*this)(item));
  }
  constexpr LogRank log_rank(std::uint64_t item) const noexcept { return rank_of(uniform(item)); }

  constexpr std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_ = 0;
};

/// k hash functions derived from one master seed. Immutable; share freely.
class HashFamily {
 public:
  HashFamily(HashSeed master, std::size_t count);

  static std::shared_ptr<const HashFamily> make(HashSeed master, std::size_t count) {
    return std::make_shared<const HashFamily>(master, count);
  }

  const SeededHash& operator[](std::size_t i) const noexcept { return members_[i]; }
  std::size_t size() const noexcept { return members_.size(); }
  HashSeed seed() const noexcept { return seed_; }
  const SeededHash* data() const noexcept { return members_.data(); }

 private:
  HashSeed seed_;
  std::vector<SeededHash> members_;
};

/// The hash used for a single-function sketch (OPH, HLL) with this seed.
SeededHash single_hash(HashSeed master) noexcept;

UnitFraction uniform_hash(HashSeed seed, std::uint64_t item) noexcept;
LogRank log_rank(HashSeed seed, std::uint64_t item) noexcept;

/// 64-bit FNV-1a followed by a finalizer; maps string tokens onto item ids.
std::uint64_t hash_string(std::string_view text) noexcept;

}  // namespace maxlog
