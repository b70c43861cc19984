#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <random>
#include <set>

#include "maxlog/hashing.hpp"
#include "test_support.hpp"

using namespace maxlog;

TEST_CASE("uniform_hash is deterministic per seed") {
  const HashSeed seed{7};
  for (std::uint64_t v : {0ULL, 1ULL, 42ULL, ~0ULL}) {
    CHECK(uniform_hash(seed, v) == uniform_hash(seed, v));
    CHECK(log_rank(seed, v) == log_rank(seed, v));
  }
  CHECK(uniform_hash(HashSeed{7}, 99) != uniform_hash(HashSeed{8}, 99));
}

TEST_CASE("a zero hash word maps to numerator 1") {
  CHECK(UnitFraction::from_word(0).numerator == 1);
  CHECK(UnitFraction::from_word(5).numerator == 5);
  CHECK(rank_of(UnitFraction::from_word(0)).rank == 64);
}

TEST_CASE("rank of exact fractions") {
  auto frac = [](long double h) { return UnitFraction{static_cast<std::uint64_t>(h * 0x1p64L)}; };
  CHECK(rank_of(UnitFraction{std::uint64_t{1} << 62}).rank == 2);
  CHECK(rank_of(frac(0.3L)).rank == 1);
  CHECK(rank_of(frac(0.9L)).rank == 0);
  CHECK(rank_of(UnitFraction{std::uint64_t{1} << 63}).rank == 1);
  CHECK(rank_of(UnitFraction{(std::uint64_t{1} << 62) + 1}).rank == 1);
  CHECK(rank_of(UnitFraction{(std::uint64_t{1} << 62) - 1}).rank == 2);
  CHECK(rank_of(UnitFraction{~std::uint64_t{0}}).rank == 0);
  CHECK(rank_of(UnitFraction{1}).rank == 64);
  CHECK(rank_of(UnitFraction{2}).rank == 63);
  CHECK(rank_of(UnitFraction{~0ULL}).rank == 0);
}

TEST_CASE("chi-square uniformity over sequential items") {
  constexpr std::size_t kItems = 1'000'000;
  constexpr std::size_t kBuckets = 256;
  std::vector<double> counts(kBuckets, 0.0);
  const HashSeed seed{42};
  for (std::uint64_t v = 0; v < kItems; ++v) counts[uniform_hash(seed, v).numerator >> 56] += 1.0;
  const double expected = static_cast<double>(kItems) / kBuckets;
  double stat = 0.0;
  for (double c : counts) stat += (c - expected) * (c - expected) / expected;
  const boost::math::chi_squared dist(kBuckets - 1);
  const double p = boost::math::cdf(boost::math::complement(dist, stat));
  INFO("chi2 = " << stat << ", p = " << p);
  CHECK(p > 0.001);
}

TEST_CASE("rank frequencies follow Geometric(1/2)") {
  constexpr std::size_t kItems = 1 << 22;
  std::vector<double> counts(65, 0.0);
  const HashSeed seed{2024};
  for (std::uint64_t v = 0; v < kItems; ++v) counts[log_rank(seed, v * 0x9e3779b97f4a7c15ULL).rank] += 1.0;
  for (int j = 0; j <= 30; ++j) {
    const double p = std::ldexp(1.0, -(j + 1));
    const double expected = kItems * p;
    if (expected <= 100) break;
    // 5% relative once that exceeds three binomial standard deviations,
    // three standard deviations below that.
    const double sigma = std::sqrt(kItems * p * (1 - p));
    const double tolerance = std::max(0.05 * expected, 3.0 * sigma);
    INFO("rank " << j << ": observed " << counts[j] << ", expected " << expected);
    CHECK(std::abs(counts[j] - expected) <= tolerance);
    if (0.05 * expected >= 3.0 * sigma) CHECK(std::abs(counts[j] - expected) <= 0.05 * expected);
  }
}

TEST_CASE("leading-zero rank equals floor(-log2 h) in floating point") {
  std::mt19937_64 rng(5);
  const HashSeed seed{11};
  for (int t = 0; t < 100'000; ++t) {
    const auto v = rng();
    const auto h = uniform_hash(seed, v);
    const long double real = std::ldexp(static_cast<long double>(h.numerator), -64);
    const auto by_log = static_cast<int>(std::floor(-std::log2(real)));
    REQUIRE(log_rank(seed, v).rank == by_log);
    REQUIRE(log_rank(seed, v).rank == testing::rank_by_scan(h.numerator));
  }
}

TEST_CASE("hash family members are distinct and reproducible") {
  const HashFamily a(HashSeed{42}, 128);
  const HashFamily b(HashSeed{42}, 128);
  std::set<std::uint64_t> keys;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].key() == b[i].key());
    keys.insert(a[i].key());
  }
  CHECK(keys.size() == 128);
  const HashFamily c(HashSeed{43}, 4);
  CHECK(c[0].key() != a[0].key());
}

TEST_CASE("seed sequence derivation separates labels") {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t r = 0; r < 1000; ++r) seeds.insert(SeedSequence::derive(HashSeed{42}, r).value);
  CHECK(seeds.size() == 1000);
  CHECK(SeedSequence::derive(HashSeed{42}, 3) == SeedSequence::derive(HashSeed{42}, 3));
  CHECK(SeedSequence::derive(HashSeed{42}, 3) != SeedSequence::derive(HashSeed{43}, 3));
}

TEST_CASE("string tokens hash stably") {
  CHECK(hash_string("alice") == hash_string("alice"));
  CHECK(hash_string("alice") != hash_string("bob"));
  CHECK(hash_string("") == hash_string(""));
}
