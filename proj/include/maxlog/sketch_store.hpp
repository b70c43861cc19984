#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "maxlog/sketch_variant.hpp"
#include "maxlog/stream_io.hpp"

namespace maxlog {

/// Per-user sketches for one stream, all built from one SketchConfig.
///
/// A user's sketch is created when the user first appears. Ingestion is
/// single-writer; const queries may run concurrently once ingestion stops.
class SketchStore {
 public:
  explicit SketchStore(SketchConfig config);

  void add(const std::string& user, std::uint64_t item);
  void ingest(std::span<const stream::UserItemEvent> events);

  /// Throws UnknownUserError for users never seen.
  JaccardEstimate estimate(const std::string& user1, const std::string& user2) const;

  bool contains(const std::string& user) const { return sketches_.contains(user); }
  const AnySketch& sketch(const std::string& user) const;
  std::size_t size() const noexcept { return sketches_.size(); }
  std::vector<std::string> users() const;
  const SketchConfig& config() const noexcept { return factory_.config(); }
  std::uint64_t events_applied() const noexcept { return events_applied_; }

  /// Snapshot: "MLSS", u16 version, u8 algorithm, u8 width, u32 k,
  /// u64 seed, u64 events, u32 users, then per user (u32 length + name,
  /// u32 length + sketch envelope), users in lexicographic order.
  void save(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  static SketchStore load(std::istream& in);
  static SketchStore load(const std::filesystem::path& path);

  friend bool operator==(const SketchStore& a, const SketchStore& b);

 private:
  SketchFactory factory_;
  std::map<std::string, AnySketch> sketches_;
  std::uint64_t events_applied_ = 0;
};

}  // namespace maxlog
