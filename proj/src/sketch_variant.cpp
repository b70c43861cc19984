#include "maxlog/sketch_variant.hpp"

#include "maxlog/errors.hpp"
#include "maxlog/serialization.hpp"

namespace maxlog {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace

std::string_view to_string(Algorithm algo) noexcept {
  switch (algo) {
    case Algorithm::maxlog: return "maxlog";
    case Algorithm::oph: return "oph";
    case Algorithm::minhash: return "minhash";
    case Algorithm::hll: return "hll";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept {
  if (name == "maxlog") return Algorithm::maxlog;
  if (name == "oph") return Algorithm::oph;
  if (name == "minhash") return Algorithm::minhash;
  if (name == "hll") return Algorithm::hll;
  return std::nullopt;
}

SketchFactory::SketchFactory(SketchConfig config) : config_(config) {
  if (config_.algorithm == Algorithm::maxlog || config_.algorithm == Algorithm::minhash) {
    if (config_.k < 1) throw ConfigError("register count k must be at least 1");
    family_ = HashFamily::make(config_.seed, config_.k);
  }
  // Validate the remaining parameters once, up front.
  (void)make();
}

AnySketch SketchFactory::make() const {
  switch (config_.algorithm) {
    case Algorithm::maxlog: return MaxLogSketch(family_, config_.width);
    case Algorithm::oph: return OphSketch(config_.k, config_.width, config_.seed);
    case Algorithm::minhash: return MinHashSketch(family_);
    case Algorithm::hll: return HllSketch(config_.k, config_.seed);
  }
  throw ConfigError("unknown algorithm");
}

AnySketch SketchFactory::from_items(std::span<const std::uint64_t> items) const {
  AnySketch sketch = make();
  std::visit(
      [items](auto& s) {
        for (auto item : items) s.update(item);
      },
      sketch);
  return sketch;
}

void update(AnySketch& sketch, std::uint64_t item) {
  std::visit([item](auto& s) { s.update(item); }, sketch);
}

JaccardEstimate estimate(const AnySketch& a, const AnySketch& b) {
  if (a.index() != b.index()) throw IncompatibleSketchError("cannot compare sketches of different algorithms");
  return std::visit(
      overloaded{
          [&](const MaxLogSketch& x) { return estimate_jaccard(x, std::get<MaxLogSketch>(b)); },
          [&](const OphSketch& x) { return oph_estimate_jaccard(x, std::get<OphSketch>(b)); },
          [&](const MinHashSketch& x) { return minhash_estimate(x, std::get<MinHashSketch>(b)); },
          [&](const HllSketch& x) { return hll_jaccard(x, std::get<HllSketch>(b)); },
      },
      a);
}

std::size_t memory_bits(const AnySketch& sketch) {
  return std::visit([](const auto& s) -> std::size_t { return s.memory_bits(); }, sketch);
}

std::uint64_t item_count(const AnySketch& sketch) {
  return std::visit([](const auto& s) -> std::uint64_t { return s.item_count(); }, sketch);
}

Algorithm algorithm_of(const AnySketch& sketch) noexcept {
  return static_cast<Algorithm>(sketch.index());
}

std::vector<std::uint8_t> serialize(const AnySketch& sketch) {
  return std::visit([](const auto& s) { return s.serialize(); }, sketch);
}

AnySketch deserialize_any(std::span<const std::uint8_t> bytes) {
  switch (peek_sketch_tag(bytes)) {
    case SketchTag::maxlog: return MaxLogSketch::deserialize(bytes);
    case SketchTag::oph: return OphSketch::deserialize(bytes);
    case SketchTag::minhash: return MinHashSketch::deserialize(bytes);
    case SketchTag::hll: return HllSketch::deserialize(bytes);
  }
  throw ParseError(0, "unknown sketch type tag");
}

}  // namespace maxlog
