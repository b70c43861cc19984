#include <doctest.h>

#include <cmath>
#include <random>

#include "maxlog/errors.hpp"
#include "maxlog/hyperloglog.hpp"
#include "maxlog/minhash.hpp"
#include "maxlog/sketch_variant.hpp"
#include "test_support.hpp"

using namespace maxlog;

TEST_CASE("MinHash registers hold per-function minima") {
  const std::vector<std::uint64_t> items{3, 1, 4, 1000, 59};
  const MinHashSketch s = [&] {
    MinHashSketch m(16, HashSeed{7});
    for (auto v : items) m.update(v);
    return m;
  }();
  const HashFamily family(HashSeed{7}, 16);
  for (std::size_t i = 0; i < 16; ++i) {
    std::uint64_t lowest = ~0ULL;
    for (auto v : items) lowest = std::min(lowest, family[i](v));
    CHECK(s.minima()[i] == lowest);
  }
  CHECK(s.memory_bits() == 16 * 32);
  CHECK(s.memory_bits(MinHashWidth::bits64) == 16 * 64);
}

TEST_CASE("MinHash estimates") {
  std::mt19937_64 rng(1);
  const auto a_items = testing::random_items(rng, 2000);
  const auto b_items = testing::random_items(rng, 2000);
  MinHashSketch a(128, HashSeed{1}), b(128, HashSeed{1});
  for (auto v : a_items) a.update(v);
  for (auto v : b_items) b.update(v);
  CHECK(minhash_estimate(a, a).estimate == 1.0);
  CHECK(minhash_estimate(a, b).estimate == 0.0);
  CHECK_THROWS_AS(minhash_estimate(a, MinHashSketch(64, HashSeed{1})), IncompatibleSketchError);
  CHECK_THROWS_AS(minhash_estimate(a, MinHashSketch(128, HashSeed{1})), EmptySketchError);
  CHECK(MinHashSketch::deserialize(a.serialize()) == a);
}

TEST_CASE("MinHash is unbiased at high similarity") {
  constexpr std::size_t k = 128;
  constexpr int runs = 400;
  std::mt19937_64 rng(2);
  for (double j : {0.8, 0.9, 0.99}) {
    // |A| = |B| = 1000 with c shared: J = c / (2000 - c).
    const auto c = static_cast<std::size_t>(std::llround(2000 * j / (1 + j)));
    const auto universe = testing::random_items(rng, 2000 - c);
    const std::vector<std::uint64_t> a(universe.begin(), universe.begin() + 1000);
    std::vector<std::uint64_t> b(universe.begin(), universe.begin() + static_cast<std::ptrdiff_t>(c));
    b.insert(b.end(), universe.begin() + 1000, universe.end());
    const double truth = static_cast<double>(c) / static_cast<double>(2000 - c);
    double sum = 0, sum_sq = 0;
    for (int r = 0; r < runs; ++r) {
      const auto family = HashFamily::make(HashSeed{static_cast<std::uint64_t>(r)}, k);
      MinHashSketch sa(family), sb(family);
      for (auto v : a) sa.update(v);
      for (auto v : b) sb.update(v);
      const double e = minhash_estimate(sa, sb).estimate;
      sum += e;
      sum_sq += e * e;
    }
    const double mean = sum / runs;
    const double sd = std::sqrt(std::max(1e-12, sum_sq / runs - mean * mean));
    CAPTURE(j);
    CHECK(std::abs(mean - truth) <= 3 * sd / std::sqrt(runs));
  }
}

TEST_CASE("HLL configuration and alpha constants") {
  CHECK_THROWS_AS(HllSketch(8, HashSeed{1}), ConfigError);
  CHECK(hll_alpha(16) == doctest::Approx(0.673));
  CHECK(hll_alpha(32) == doctest::Approx(0.697));
  CHECK(hll_alpha(64) == doctest::Approx(0.709));
  CHECK(hll_alpha(1024) == doctest::Approx(0.7213 / (1 + 1.079 / 1024)));
  CHECK(HllSketch(1024, HashSeed{1}).memory_bits() == 5120);
  CHECK(HllSketch(102, HashSeed{1}).m() == 102);
}

TEST_CASE("HLL empty sketch estimates zero") {
  CHECK(HllSketch(64, HashSeed{1}).cardinality() == 0.0);
}

TEST_CASE("HLL cardinality error at m = 1024") {
  constexpr int runs = 100;
  std::mt19937_64 rng(3);
  const auto items = testing::random_items(rng, 10'000);
  double sum = 0, sum_sq = 0;
  for (int r = 0; r < runs; ++r) {
    HllSketch s(1024, HashSeed{static_cast<std::uint64_t>(r)});
    for (auto v : items) s.update(v);
    const double rel = s.cardinality() / 10'000.0 - 1.0;
    CHECK(std::abs(rel) <= 3 * 1.04 / 32);
    sum += rel;
    sum_sq += rel * rel;
  }
  const double mean = sum / runs;
  const double sd = std::sqrt(sum_sq / runs - mean * mean);
  CHECK(std::abs(mean) <= 3 * sd / std::sqrt(runs));
  CHECK(sd < 2 * 1.04 / 32);
}

TEST_CASE("HLL merge is a register-wise join") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 1000; ++t) {
    const auto a_items = testing::random_items(rng, 1 + rng() % 50);
    const auto b_items = testing::random_items(rng, 1 + rng() % 50);
    HllSketch a(32, HashSeed{9}), b(32, HashSeed{9}), both(32, HashSeed{9}), shuffled_a(32, HashSeed{9});
    for (auto v : a_items) {
      a.update(v);
      both.update(v);
    }
    for (auto v : testing::shuffled(a_items, rng)) shuffled_a.update(v);
    for (auto v : b_items) {
      b.update(v);
      both.update(v);
    }
    REQUIRE(std::ranges::equal(a.registers(), shuffled_a.registers()));
    const auto ab = hll_merge(a, b);
    const auto ba = hll_merge(b, a);
    REQUIRE(std::ranges::equal(ab.registers(), both.registers()));
    REQUIRE(std::ranges::equal(ab.registers(), ba.registers()));
    REQUIRE(std::ranges::equal(hll_merge(ab, ab).registers(), ab.registers()));
    REQUIRE(std::ranges::equal(hll_merge(hll_merge(a, b), a).registers(), ab.registers()));
  }
  CHECK_THROWS_AS(hll_merge(HllSketch(32, HashSeed{1}), HllSketch(32, HashSeed{2})), IncompatibleSketchError);
}

TEST_CASE("HLL Jaccard") {
  std::mt19937_64 rng(5);
  const auto a_items = testing::random_items(rng, 5000);
  const auto b_items = testing::random_items(rng, 5000);
  HllSketch a(512, HashSeed{1}), b(512, HashSeed{1});
  for (auto v : a_items) a.update(v);
  for (auto v : b_items) b.update(v);
  const auto same = hll_jaccard(a, a);
  CHECK(same.raw == doctest::Approx(1.0));
  CHECK(same.estimate == 1.0);
  const auto disjoint = hll_jaccard(a, b);
  CHECK(disjoint.estimate >= 0.0);
  CHECK(disjoint.estimate < 0.1);
  CHECK_THROWS_AS(hll_jaccard(HllSketch(64, HashSeed{1}), HllSketch(64, HashSeed{1})), EmptySketchError);
  CHECK(HllSketch::deserialize(a.serialize()) == a);
}

TEST_CASE("variant sketches dispatch and round-trip") {
  std::mt19937_64 rng(6);
  const auto items = testing::random_items(rng, 300);
  for (auto algo : {Algorithm::maxlog, Algorithm::oph, Algorithm::minhash, Algorithm::hll}) {
    const SketchFactory factory({algo, 64, 6, HashSeed{3}});
    const auto s = factory.from_items(items);
    CAPTURE(to_string(algo));
    CHECK(algorithm_of(s) == algo);
    CHECK(item_count(s) == 300);
    CHECK(estimate(s, s).estimate == doctest::Approx(1.0));
    const auto back = deserialize_any(serialize(s));
    CHECK(back == s);
    auto streamed = factory.make();
    for (auto v : testing::shuffled(items, rng)) update(streamed, v);
    CHECK(serialize(streamed) == serialize(s));
  }
  CHECK(parse_algorithm("oph") == Algorithm::oph);
  CHECK_FALSE(parse_algorithm("bogus").has_value());
  const auto m = SketchFactory({Algorithm::maxlog, 8, 6, HashSeed{1}}).make();
  const auto h = SketchFactory({Algorithm::minhash, 8, 6, HashSeed{1}}).make();
  CHECK_THROWS_AS(estimate(m, h), IncompatibleSketchError);
}
