#include "maxlog/stream_io.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <string_view>

#include "maxlog/errors.hpp"
#include "maxlog/hashing.hpp"

namespace maxlog::stream {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool parse_u64(std::string_view token, std::uint64_t& out) {
  if (token.empty()) return false;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc{} && ptr == token.data() + token.size();
}

std::uint64_t pair_key(const std::string& user, std::uint64_t item) {
  return mix64(hash_string(user) ^ mix64(item + 0x632be59bd9b4e019ULL));
}

}  // namespace

std::uint64_t item_id(std::string_view token) {
  std::uint64_t value = 0;
  if (parse_u64(token, value)) return value;
  return hash_string(token);
}

ParseResult parse_tsv(std::istream& in, OnError on_error) {
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;
  std::uint64_t t = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (trim(view).empty()) continue;

    std::string problem;
    const auto tab = view.find('\t');
    if (tab == std::string_view::npos) {
      problem = "expected user<TAB>item, found no tab";
    } else if (view.find('\t', tab + 1) != std::string_view::npos) {
      problem = "expected exactly two tab-separated fields";
    } else if (trim(view.substr(0, tab)).empty()) {
      problem = "empty user field";
    } else if (trim(view.substr(tab + 1)).empty()) {
      problem = "empty item field";
    }
    if (!problem.empty()) {
      if (on_error == OnError::fail_fast) throw ParseError(line_no, problem);
      result.issues.push_back({line_no, problem});
      continue;
    }
    result.events.push_back(
        {std::string(trim(view.substr(0, tab))), item_id(trim(view.substr(tab + 1))), ++t});
  }
  return result;
}

DedupFilter DedupFilter::bloom(std::size_t expected_pairs, double fp_rate) {
  return DedupFilter(false, BloomFilter(expected_pairs, fp_rate));
}

DedupFilter DedupFilter::exact() { return DedupFilter(true, BloomFilter(1, 0.5)); }

bool DedupFilter::insert(const std::string& user, std::uint64_t item) {
  const bool fresh = exact_ ? seen_.emplace(user, item).second : bloom_.insert(pair_key(user, item));
  if (fresh) ++inserted_;
  return fresh;
}

DedupResult dedup(const std::vector<UserItemEvent>& events, DedupFilter& filter) {
  DedupResult result;
  result.events.reserve(events.size());
  for (const auto& e : events) {
    if (filter.insert(e.user, e.item)) {
      result.events.push_back(e);
    } else {
      ++result.dropped;
    }
  }
  return result;
}

FimiDataset parse_fimi(std::istream& in) {
  FimiDataset data;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<std::uint64_t> record;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
      if (pos >= line.size()) break;
      std::size_t end = pos;
      while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
      const std::string_view token(line.data() + pos, end - pos);
      std::uint64_t value = 0;
      if (!parse_u64(token, value)) {
        throw ParseError(line_no, "non-integer item token '" + std::string(token) + "' at column " +
                                      std::to_string(pos + 1));
      }
      record.push_back(value);
      pos = end;
    }
    if (record.empty()) continue;
    std::sort(record.begin(), record.end());
    record.erase(std::unique(record.begin(), record.end()), record.end());
    data.records.push_back(std::move(record));
  }
  return data;
}

FimiStream fimi_to_stream(const FimiDataset& data) {
  FimiStream out;
  std::set<std::uint64_t> items;
  std::uint64_t t = 0;
  for (std::size_t r = 0; r < data.records.size(); ++r) {
    for (auto item : data.records[r]) {
      out.events.push_back({std::to_string(item), static_cast<std::uint64_t>(r + 1), ++t});
      items.insert(item);
    }
  }
  out.records = data.records.size();
  out.distinct_items = items.size();
  out.pairs = out.events.size();
  return out;
}

FimiStream fimi_to_stream(std::istream& in) { return fimi_to_stream(parse_fimi(in)); }

}  // namespace maxlog::stream
