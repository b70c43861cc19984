#include <doctest.h>

#include <random>

#include "maxlog/errors.hpp"
#include "maxlog/packed_registers.hpp"

using namespace maxlog;

TEST_CASE("layout keeps lanes inside words") {
  const PackedRegisters r(100, 6);
  CHECK(r.lane_bits() == 7);
  CHECK(r.lanes_per_word() == 9);
  CHECK(r.words().size() == 12);
  CHECK(r.sentinel() == 63);
  CHECK(PackedRegisters(10, 1).lanes_per_word() == 32);
  CHECK(PackedRegisters(10, 7).lanes_per_word() == 8);
  CHECK_THROWS_AS(PackedRegisters(4, 0), ConfigError);
  CHECK_THROWS_AS(PackedRegisters(4, 8), ConfigError);
}

TEST_CASE("set, read back and clear lanes") {
  PackedRegisters r(20, 5);
  r.set(0, true, 31);
  r.set(5, false, 7);
  r.set(19, true, 0);
  CHECK(r.code(0) == 31);
  CHECK(r.indicator(0));
  CHECK(r.code(5) == 7);
  CHECK_FALSE(r.indicator(5));
  CHECK(r.code(19) == 0);
  CHECK(r.indicator(19));
  CHECK(r.code(1) == 0);
  r.clear_indicator(0);
  CHECK_FALSE(r.indicator(0));
  CHECK(r.code(0) == 31);
  r.set(5, true, 9);
  CHECK(r.code(5) == 9);
  CHECK(r.code(4) == 0);
  CHECK(r.code(6) == 0);
}

namespace {

std::size_t scalar_count(const PackedRegisters& a, const PackedRegisters& b, const std::vector<bool>* mask) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (mask && !(*mask)[i]) continue;
    if (a.code(i) > b.code(i) && a.indicator(i)) ++n;
    if (b.code(i) > a.code(i) && b.indicator(i)) ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("word-parallel disagreement count matches a per-lane loop") {
  std::mt19937_64 rng(9);
  for (unsigned width = 1; width <= 7; ++width) {
    for (std::size_t k : {1UL, 7UL, 64UL, 100UL, 257UL}) {
      PackedRegisters a(k, width), b(k, width);
      std::vector<bool> mask(k);
      std::vector<std::uint64_t> bitmap((k + 63) / 64, 0);
      const std::uint64_t top = (std::uint64_t{1} << width);
      for (std::size_t i = 0; i < k; ++i) {
        a.set(i, rng() & 1U, static_cast<std::uint8_t>(rng() % top));
        b.set(i, rng() & 1U, static_cast<std::uint8_t>(rng() % top));
        mask[i] = rng() & 1U;
        if (mask[i]) bitmap[i / 64] |= std::uint64_t{1} << (i % 64);
      }
      CAPTURE(width);
      CAPTURE(k);
      CHECK(a.count_unique_max_disagreements(b) == scalar_count(a, b, nullptr));
      CHECK(a.count_unique_max_disagreements(b, bitmap) == scalar_count(a, b, &mask));
    }
  }
}
