#include "maxlog/sketch_store.hpp"

#include <fstream>
#include <iterator>

#include "maxlog/errors.hpp"
#include "maxlog/serialization.hpp"

namespace maxlog {

namespace {

constexpr std::array<char, 4> kStoreMagic{'M', 'L', 'S', 'S'};
constexpr std::uint16_t kStoreVersion = 1;

}  // namespace

SketchStore::SketchStore(SketchConfig config) : factory_(config) {}

void SketchStore::add(const std::string& user, std::uint64_t item) {
  auto it = sketches_.find(user);
  if (it == sketches_.end()) it = sketches_.emplace(user, factory_.make()).first;
  update(it->second, item);
  ++events_applied_;
}

void SketchStore::ingest(std::span<const stream::UserItemEvent> events) {
  for (const auto& e : events) add(e.user, e.item);
}

const AnySketch& SketchStore::sketch(const std::string& user) const {
  const auto it = sketches_.find(user);
  if (it == sketches_.end()) throw UnknownUserError("unknown user '" + user + "'");
  return it->second;
}

JaccardEstimate SketchStore::estimate(const std::string& user1, const std::string& user2) const {
  return maxlog::estimate(sketch(user1), sketch(user2));
}

std::vector<std::string> SketchStore::users() const {
  std::vector<std::string> out;
  out.reserve(sketches_.size());
  for (const auto& [user, _] : sketches_) out.push_back(user);
  return out;
}

void SketchStore::save(std::ostream& out) const {
  ByteWriter w;
  for (char c : kStoreMagic) w.u8(static_cast<std::uint8_t>(c));
  w.u16(kStoreVersion);
  const auto& cfg = config();
  w.u8(static_cast<std::uint8_t>(cfg.algorithm));
  w.u8(static_cast<std::uint8_t>(cfg.width));
  w.u32(static_cast<std::uint32_t>(cfg.k));
  w.u64(cfg.seed.value);
  w.u64(events_applied_);
  w.u32(static_cast<std::uint32_t>(sketches_.size()));
  for (const auto& [user, sketch] : sketches_) {
    w.text(user);
    const auto blob = serialize(sketch);
    w.u32(static_cast<std::uint32_t>(blob.size()));
    w.raw(blob);
  }
  const auto bytes = w.take();
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed to write sketch store snapshot");
}

void SketchStore::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  save(out);
}

SketchStore SketchStore::load(std::istream& in) {
  const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  ByteReader r(bytes);
  for (char c : kStoreMagic) {
    if (r.u8() != static_cast<std::uint8_t>(c)) throw ParseError(0, "not a sketch store snapshot");
  }
  if (r.u16() != kStoreVersion) throw ParseError(0, "unsupported snapshot version");
  SketchConfig cfg;
  const auto algo = r.u8();
  if (algo > static_cast<std::uint8_t>(Algorithm::hll)) throw ParseError(0, "unknown algorithm in snapshot");
  cfg.algorithm = static_cast<Algorithm>(algo);
  cfg.width = r.u8();
  cfg.k = r.u32();
  cfg.seed = HashSeed{r.u64()};
  SketchStore store(cfg);
  store.events_applied_ = r.u64();
  const auto users = r.u32();
  for (std::uint32_t u = 0; u < users; ++u) {
    auto user = r.text();
    const auto size = r.u32();
    auto sketch = deserialize_any(r.raw(size));
    if (algorithm_of(sketch) != cfg.algorithm) throw ParseError(0, "snapshot sketch type mismatch");
    store.sketches_.emplace(std::move(user), std::move(sketch));
  }
  r.expect_done();
  return store;
}

SketchStore SketchStore::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return load(in);
}

bool operator==(const SketchStore& a, const SketchStore& b) {
  return a.config() == b.config() && a.events_applied_ == b.events_applied_ && a.sketches_ == b.sketches_;
}

}  // namespace maxlog
