#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "maxlog/bloom_filter.hpp"

namespace maxlog::stream {

/// One arrival (u, v) at index t (1-based).
struct UserItemEvent {
  std::string user;
  std::uint64_t item = 0;
  std::uint64_t t = 0;

  friend bool operator==(const UserItemEvent&, const UserItemEvent&) = default;
};

/// Item tokens that are plain unsigned decimals keep their value; anything
/// else is hashed to 64 bits.
std::uint64_t item_id(std::string_view token);

enum class OnError { fail_fast, skip };

struct ParseIssue {
  std::size_t line = 0;
  std::string message;
};

struct ParseResult {
  std::vector<UserItemEvent> events;
  std::vector<ParseIssue> issues;
};

/// Reads `user<TAB>item` lines. Blank lines are ignored. With fail_fast a
/// malformed line throws ParseError naming its line number; with skip it is
/// recorded in `issues` and parsing continues.
ParseResult parse_tsv(std::istream& in, OnError on_error = OnError::fail_fast);

/// Duplicate (user, item) filter: Bloom-backed (no false negatives, rare
/// false positives drop a legitimate pair) or exact.
class DedupFilter {
 public:
  static DedupFilter bloom(std::size_t expected_pairs, double fp_rate = 1e-6);
  static DedupFilter exact();

  /// True if the pair has not been seen before (and records it).
  bool insert(const std::string& user, std::uint64_t item);

  bool is_exact() const noexcept { return exact_; }
  std::size_t inserted() const noexcept { return inserted_; }
  const BloomFilter* bloom_filter() const noexcept { return exact_ ? nullptr : &bloom_; }

 private:
  DedupFilter(bool exact, BloomFilter bloom) : exact_(exact), bloom_(std::move(bloom)) {}

  bool exact_;
  BloomFilter bloom_;
  std::set<std::pair<std::string, std::uint64_t>> seen_;
  std::size_t inserted_ = 0;
};

struct DedupResult {
  std::vector<UserItemEvent> events;
  std::size_t dropped = 0;
};

/// Keeps the first occurrence of every pair, preserving arrival order.
DedupResult dedup(const std::vector<UserItemEvent>& events, DedupFilter& filter);

/// FIMI transaction file: one record per line, whitespace-separated
/// integer item ids. Each record is kept as a set.
struct FimiDataset {
  std::vector<std::vector<std::uint64_t>> records;
};

FimiDataset parse_fimi(std::istream& in);

struct FimiStream {
  std::vector<UserItemEvent> events;
  std::size_t records = 0;
  std::size_t distinct_items = 0;
  std::size_t pairs = 0;
};

/// Inverts transactions into an item-record stream: for record x (1-based)
/// and each item w in x, emits (user = w, item = x).
FimiStream fimi_to_stream(const FimiDataset& data);
FimiStream fimi_to_stream(std::istream& in);

}  // namespace maxlog::stream
