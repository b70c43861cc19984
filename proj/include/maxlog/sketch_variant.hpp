#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "maxlog/hashing.hpp"
#include "maxlog/hyperloglog.hpp"
#include "maxlog/jaccard_estimate.hpp"
#include "maxlog/maxlog_sketch.hpp"
#include "maxlog/minhash.hpp"
#include "maxlog/oph_sketch.hpp"

namespace maxlog {

enum class Algorithm { maxlog, oph, minhash, hll };

std::string_view to_string(Algorithm algo) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept;

/// Everything needed to build compatible sketches. For HyperLogLog, `k`
/// is the register count m; `width` is ignored by MinHash and HLL.
struct SketchConfig {
  Algorithm algorithm = Algorithm::maxlog;
  std::size_t k = 128;
  unsigned width = kDefaultRankWidth;
  HashSeed seed{};

  friend bool operator==(const SketchConfig&, const SketchConfig&) = default;
};

using AnySketch = std::variant<MaxLogSketch, OphSketch, MinHashSketch, HllSketch>;

/// Builds sketches for one configuration, sharing the k-function hash
/// family between all sketches it creates.
class SketchFactory {
 public:
  explicit SketchFactory(SketchConfig config);

  AnySketch make() const;
  AnySketch from_items(std::span<const std::uint64_t> items) const;
  const SketchConfig& config() const noexcept { return config_; }

 private:
  SketchConfig config_;
  std::shared_ptr<const HashFamily> family_;
};

void update(AnySketch& sketch, std::uint64_t item);
JaccardEstimate estimate(const AnySketch& a, const AnySketch& b);
std::size_t memory_bits(const AnySketch& sketch);
std::uint64_t item_count(const AnySketch& sketch);
Algorithm algorithm_of(const AnySketch& sketch) noexcept;

std::vector<std::uint8_t> serialize(const AnySketch& sketch);
AnySketch deserialize_any(std::span<const std::uint8_t> bytes);

}  // namespace maxlog
