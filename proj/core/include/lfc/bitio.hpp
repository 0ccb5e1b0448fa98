#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace lfc {

// Little-endian fixed-width fields.
class ByteWriter {
 public:
  void u8(uint8_t v) { bytes_.push_back(v); }
  void u16(uint16_t v) { put(v, 2); }
  void u32(uint32_t v) { put(v, 4); }
  void u64(uint64_t v) { put(v, 8); }
  void f64(double v);
  void raw(std::span<const uint8_t> data) { bytes_.insert(bytes_.end(), data.begin(), data.end()); }
  void tag(std::string_view text);

  size_t size() const noexcept { return bytes_.size(); }
  const std::vector<uint8_t>& bytes() const noexcept { return bytes_; }
  std::vector<uint8_t> take() { return std::move(bytes_); }

 private:
  void put(uint64_t v, size_t n) {
    for (size_t i = 0; i < n; ++i) bytes_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  std::vector<uint8_t> bytes_;
};

// Reads what ByteWriter wrote; any read past the end is a truncation error.
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  uint8_t u8() { return static_cast<uint8_t>(get(1)); }
  uint16_t u16() { return static_cast<uint16_t>(get(2)); }
  uint32_t u32() { return static_cast<uint32_t>(get(4)); }
  uint64_t u64() { return get(8); }
  double f64();
  std::span<const uint8_t> raw(size_t n);
  void expectTag(std::string_view text);

  size_t position() const noexcept { return pos_; }
  size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  uint64_t get(size_t n);
  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

// MSB-first bit packing within bytes.
class BitWriter {
 public:
  // Writes the low `count` bits of `bits`, most significant first; count <= 32.
  void write(uint32_t bits, unsigned count);
  // Pads the final byte with zero bits.
  std::vector<uint8_t> finish();
  uint64_t bitCount() const noexcept { return bitCount_; }

 private:
  std::vector<uint8_t> bytes_;
  uint64_t acc_ = 0;
  unsigned accBits_ = 0;
  uint64_t bitCount_ = 0;
};

class BitReader {
 public:
  BitReader(std::span<const uint8_t> bytes, uint64_t bitCount);

  uint32_t bit();
  uint32_t read(unsigned count);
  // Next `count` bits without consuming, zero-filled past the end.
  uint32_t peek(unsigned count) const;
  void skip(unsigned count);

  uint64_t position() const noexcept { return pos_; }
  uint64_t remaining() const noexcept { return bitCount_ - pos_; }

 private:
  std::span<const uint8_t> bytes_;
  uint64_t bitCount_;
  uint64_t pos_ = 0;
};

}  // namespace lfc
