#include <doctest.h>

#include <cmath>
#include <random>

#include "maxlog/errors.hpp"
#include "maxlog/maxlog_sketch.hpp"
#include "maxlog/oph_sketch.hpp"
#include "test_support.hpp"

using namespace maxlog;

TEST_CASE("configuration") {
  CHECK_NOTHROW(OphSketch(128, 6, HashSeed{1}));
  CHECK_NOTHROW(OphSketch(1, 6, HashSeed{1}));
  CHECK_THROWS_AS(OphSketch(100, 6, HashSeed{1}), ConfigError);
  CHECK_THROWS_AS(OphSketch(0, 6, HashSeed{1}), ConfigError);
  CHECK_THROWS_AS(OphSketch(128, 0, HashSeed{1}), ConfigError);
  CHECK(OphSketch(128, 6, HashSeed{1}).memory_bits() == 128 * 8);
}

TEST_CASE("bucket update branches") {
  OphSketch s(16, 6, HashSeed{1});
  s.apply(7, 4);
  CHECK(s.filled() == 1);
  CHECK(s.register_at(7) == std::pair<bool, std::uint8_t>{true, 4});
  s.apply(7, 4);
  CHECK(s.register_at(7) == std::pair<bool, std::uint8_t>{false, 4});
  s.apply(7, 2);
  CHECK(s.register_at(7) == std::pair<bool, std::uint8_t>{false, 4});
  s.apply(7, 6);
  CHECK(s.register_at(7) == std::pair<bool, std::uint8_t>{true, 6});
  s.apply(3, 0);
  CHECK(s.filled() == 2);
  CHECK(s.register_at(3) == std::pair<bool, std::uint8_t>{true, 0});
  CHECK_THROWS_AS(s.register_at(4), std::logic_error);
  CHECK(s.registers_touched() == 5);
}

TEST_CASE("locate splits one hash into bucket and rank") {
  const OphSketch s(64, 6, HashSeed{9});
  const auto h = single_hash(HashSeed{9});
  for (std::uint64_t v = 0; v < 1000; ++v) {
    const auto [bucket, rank] = s.locate(v);
    const std::uint64_t word = h(v);
    CHECK(bucket == (word & 63));
    CHECK(rank == testing::leading_zeros_by_scan(word | 63));
  }
}

TEST_CASE("each update touches one register") {
  std::mt19937_64 rng(2);
  OphSketch s(256, 6, HashSeed{4});
  const auto items = testing::random_items(rng, 5000);
  for (std::size_t i = 0; i < items.size(); ++i) {
    s.update(items[i]);
    REQUIRE(s.registers_touched() == i + 1);
  }
}

TEST_CASE("large streams fill every bucket") {
  std::mt19937_64 rng(3);
  OphSketch s(128, 6, HashSeed{4});
  for (auto v : testing::random_items(rng, 100'000)) s.update(v);
  CHECK(s.filled() == 128);
}

TEST_CASE("filled count never decreases") {
  std::mt19937_64 rng(8);
  OphSketch s(512, 6, HashSeed{4});
  std::size_t previous = 0;
  for (auto v : testing::random_items(rng, 3000)) {
    s.update(v);
    REQUIRE(s.filled() >= previous);
    previous = s.filled();
  }
}

TEST_CASE("order invariance and serialization") {
  std::mt19937_64 rng(12);
  const auto items = testing::random_items(rng, 3000);
  OphSketch a(256, 3, HashSeed{5}), b(256, 3, HashSeed{5});
  for (auto v : items) a.update(v);
  for (auto v : testing::shuffled(items, rng)) b.update(v);
  CHECK(a == b);
  CHECK(a.serialize() == b.serialize());
  CHECK_FALSE(a.overflow().empty());
  CHECK(OphSketch::deserialize(a.serialize()) == a);
}

TEST_CASE("estimator skips buckets empty on both sides") {
  OphSketch a(8, 6, HashSeed{1}), b(8, 6, HashSeed{1});
  a.apply(0, 5);
  a.apply(1, 2);
  a.apply(2, 3);
  a.apply(4, 4);
  a.apply(4, 4);
  b.apply(0, 1);
  b.apply(1, 2);
  b.apply(3, 7);
  // Used: 0..4. Hits: bucket 0 (5 > 1), bucket 2 (a only), bucket 3 (b only).
  // Bucket 4 is a-only with a tied maximum, so no hit.
  const auto e = oph_estimate_jaccard(a, b);
  CHECK(e.registers_used == 5);
  CHECK(e.k_hat == 3);
  CHECK(e.raw == doctest::Approx(1.0 - 3.0 / (5 * 0.7213)));
}

TEST_CASE("estimator matches a scalar oracle including overflow") {
  std::mt19937_64 rng(44);
  for (int t = 0; t < 50; ++t) {
    const HashSeed seed{static_cast<std::uint64_t>(t)};
    OphSketch a(64, 2, seed), b(64, 2, seed);
    for (auto v : testing::random_items(rng, 20 + rng() % 200)) a.update(v);
    for (auto v : testing::random_items(rng, 20 + rng() % 200)) b.update(v);
    std::size_t used = 0, hits = 0;
    for (std::size_t i = 0; i < 64; ++i) {
      const bool fa = a.filled_at(i), fb = b.filled_at(i);
      if (!fa && !fb) continue;
      ++used;
      if (fa != fb) {
        hits += fa ? a.register_at(i).first : b.register_at(i).first;
        continue;
      }
      const auto [sa, ra] = a.register_at(i);
      const auto [sb, rb] = b.register_at(i);
      hits += (ra > rb && sa) + (rb > ra && sb);
    }
    const auto e = oph_estimate_jaccard(a, b);
    REQUIRE(e.registers_used == used);
    REQUIRE(e.k_hat == hits);
  }
}

TEST_CASE("identical sketches estimate 1, disjoint buckets estimate 0, errors on empty") {
  std::mt19937_64 rng(5);
  OphSketch a(64, 6, HashSeed{1});
  for (auto v : testing::random_items(rng, 1000)) a.update(v);
  CHECK(oph_estimate_jaccard(a, a).estimate == 1.0);
  CHECK_THROWS_AS(oph_estimate_jaccard(a, OphSketch(64, 6, HashSeed{1})), EmptySketchError);
  CHECK_THROWS_AS(oph_estimate_jaccard(a, OphSketch(32, 6, HashSeed{1})), IncompatibleSketchError);
  OphSketch x(4, 6, HashSeed{1}), y(4, 6, HashSeed{1});
  x.apply(0, 1);
  y.apply(1, 1);
  const auto e = oph_estimate_jaccard(x, y);
  CHECK(e.registers_used == 2);
  CHECK(e.k_hat == 2);
  CHECK(e.estimate == 0.0);
}

TEST_CASE("small sets leave buckets unused") {
  std::mt19937_64 rng(6);
  const auto items = testing::random_items(rng, 50);
  OphSketch a(128, 6, HashSeed{2}), b(128, 6, HashSeed{2});
  for (std::size_t i = 0; i < items.size(); ++i) {
    a.update(items[i]);
    if (i >= 5) b.update(items[i]);
  }
  const auto e = oph_estimate_jaccard(a, b);
  CHECK(e.registers_used < 128);
  CHECK(e.registers_used > 0);
}
