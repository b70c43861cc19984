#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "maxlog/errors.hpp"

namespace maxlog {

/// Little-endian sketch envelope shared by every sketch type:
///
///   offset  size  field
///   0       4     magic "MLGS"
///   4       2     format version (1)
///   6       1     sketch type tag
///   7       1     rank width w (0 when unused)
///   8       4     register count k
///   12      8     master seed
///   20      8     item count
///   28      ...   type-specific payload
enum class SketchTag : std::uint8_t { maxlog = 1, oph = 2, minhash = 3, hll = 4 };

inline constexpr std::array<char, 4> kSketchMagic{'M', 'L', 'G', 'S'};
inline constexpr std::uint16_t kSketchFormatVersion = 1;

struct SketchHeader {
  SketchTag tag = SketchTag::maxlog;
  std::uint8_t width = 0;
  std::uint32_t k = 0;
  std::uint64_t seed = 0;
  std::uint64_t item_count = 0;
};

class ByteWriter {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u16(std::uint16_t v) { little_endian(v, 2); }
  void u32(std::uint32_t v) { little_endian(v, 4); }
  void u64(std::uint64_t v) { little_endian(v, 8); }
  void raw(std::span<const std::uint8_t> data) { bytes_.insert(bytes_.end(), data.begin(), data.end()); }
  void text(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes_.insert(bytes_.end(), s.begin(), s.end());
  }

  void header(const SketchHeader& h) {
    for (char c : kSketchMagic) u8(static_cast<std::uint8_t>(c));
    u16(kSketchFormatVersion);
    u8(static_cast<std::uint8_t>(h.tag));
    u8(h.width);
    u32(h.k);
    u64(h.seed);
    u64(h.item_count);
  }

  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  void little_endian(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(little_endian(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(little_endian(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(little_endian(4)); }
  std::uint64_t u64() { return little_endian(8); }
  std::span<const std::uint8_t> raw(std::size_t n) {
    need(n);
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  std::string text() {
    const auto n = u32();
    auto bytes = raw(n);
    return std::string(bytes.begin(), bytes.end());
  }

  SketchHeader header(SketchTag expected) {
    for (char c : kSketchMagic) {
      if (u8() != static_cast<std::uint8_t>(c)) throw ParseError(0, "bad sketch magic");
    }
    if (u16() != kSketchFormatVersion) throw ParseError(0, "unsupported sketch format version");
    SketchHeader h;
    h.tag = static_cast<SketchTag>(u8());
    if (h.tag != expected) throw ParseError(0, "unexpected sketch type tag");
    h.width = u8();
    h.k = u32();
    h.seed = u64();
    h.item_count = u64();
    return h;
  }

  bool done() const noexcept { return pos_ == data_.size(); }
  void expect_done() const {
    if (!done()) throw ParseError(0, "trailing bytes after sketch payload");
  }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw ParseError(0, "truncated sketch data");
  }
  std::uint64_t little_endian(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

/// Peek at the type tag of a serialized sketch without decoding it.
SketchTag peek_sketch_tag(std::span<const std::uint8_t> bytes);

}  // namespace maxlog
