#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace o2di {

using Bytes = std::vector<std::uint8_t>;
using BytesView = std::span<const std::uint8_t>;

inline BytesView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline Bytes to_bytes(std::string_view s) {
  return Bytes(s.begin(), s.end());
}

inline std::string to_string(BytesView b) {
  return std::string(b.begin(), b.end());
}

std::string to_hex(BytesView b);
Bytes from_hex(std::string_view hex);

// Big-endian append/read helpers used by every container format.
class ByteWriter {
 public:
  ByteWriter& u8(std::uint8_t v);
  ByteWriter& u16(std::uint16_t v);
  ByteWriter& u32(std::uint32_t v);
  ByteWriter& u64(std::uint64_t v);
  ByteWriter& raw(BytesView b);
  // 2-byte length prefix followed by the bytes.
  ByteWriter& var16(BytesView b);
  // 4-byte length prefix followed by the bytes.
  ByteWriter& var32(BytesView b);

  std::size_t size() const { return buf_.size(); }
  const Bytes& bytes() const& { return buf_; }
  Bytes take() && { return std::move(buf_); }

 private:
  Bytes buf_;
};

// Reads with bounds checks; every overrun raises DecodeError.
class ByteReader {
 public:
  explicit ByteReader(BytesView b) : data_(b) {}

  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  BytesView raw(std::size_t n);
  BytesView var16();
  BytesView var32();

  std::size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return pos_ == data_.size(); }
  void expect_done() const;

 private:
  BytesView data_;
  std::size_t pos_ = 0;
};

}  // namespace o2di
