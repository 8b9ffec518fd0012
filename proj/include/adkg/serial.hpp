#pragma once

#include <cstdint>
#include <optional>

#include "adkg/types.hpp"

namespace adkg {

/// Big-endian binary writer for canonical encodings (signed messages,
/// commitment leaves, values carried through broadcast).
class Writer {
 public:
  Writer& u8(std::uint8_t v) {
    out_.push_back(v);
    return *this;
  }
  Writer& u16(std::uint16_t v) { return be(v, 2); }
  Writer& u32(std::uint32_t v) { return be(v, 4); }
  Writer& u64(std::uint64_t v) { return be(v, 8); }
  Writer& raw(ByteView bytes) {
    out_.insert(out_.end(), bytes.begin(), bytes.end());
    return *this;
  }
  Writer& blob(ByteView bytes) {
    u32(static_cast<std::uint32_t>(bytes.size()));
    return raw(bytes);
  }
  Writer& text(std::string_view s) { return raw(as_bytes(s)); }

  const Bytes& bytes() const& { return out_; }
  Bytes bytes() && { return std::move(out_); }

 private:
  Writer& be(std::uint64_t v, int width) {
    for (int i = width - 1; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    return *this;
  }

  Bytes out_;
};

/// Reader counterpart. Every accessor throws Error(Decode) on truncation so
/// callers can wrap a whole decode in one try block.
class Reader {
 public:
  explicit Reader(ByteView data) : data_(data) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(be(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(be(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(be(4)); }
  std::uint64_t u64() { return be(8); }
  ByteView raw(std::size_t len) {
    need(len);
    auto out = data_.subspan(pos_, len);
    pos_ += len;
    return out;
  }
  Bytes blob() {
    auto len = u32();
    auto view = raw(len);
    return {view.begin(), view.end()};
  }
  template <std::size_t N>
  std::array<std::uint8_t, N> fixed() {
    std::array<std::uint8_t, N> out{};
    auto view = raw(N);
    std::copy(view.begin(), view.end(), out.begin());
    return out;
  }

  bool done() const { return pos_ == data_.size(); }
  void expect_done() const {
    if (!done()) throw Error(ErrorCode::Decode, "trailing bytes");
  }

 private:
  void need(std::size_t len) const {
    if (data_.size() - pos_ < len) throw Error(ErrorCode::Decode, "truncated input");
  }
  std::uint64_t be(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v = (v << 8) | data_[pos_++];
    return v;
  }

  ByteView data_;
  std::size_t pos_ = 0;
};

}  // namespace adkg
