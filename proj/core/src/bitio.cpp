#include "lfc/bitio.hpp"

#include <bit>
#include <string>

#include "lfc/error.hpp"

namespace lfc {

namespace {
constexpr std::string_view kModule = "bitstream";
}

void ByteWriter::f64(double v) { u64(std::bit_cast<uint64_t>(v)); }

void ByteWriter::tag(std::string_view text) {
  for (char c : text) bytes_.push_back(static_cast<uint8_t>(c));
}

double ByteReader::f64() { return std::bit_cast<double>(u64()); }

uint64_t ByteReader::get(size_t n) {
  if (remaining() < n) fail(ErrorKind::kFormat, kModule, "truncated stream");
  uint64_t v = 0;
  for (size_t i = 0; i < n; ++i) v |= static_cast<uint64_t>(bytes_[pos_ + i]) << (8 * i);
  pos_ += n;
  return v;
}

std::span<const uint8_t> ByteReader::raw(size_t n) {
  if (remaining() < n) fail(ErrorKind::kFormat, kModule, "truncated stream");
  const auto out = bytes_.subspan(pos_, n);
  pos_ += n;
  return out;
}

void ByteReader::expectTag(std::string_view text) {
  const auto got = raw(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    if (got[i] != static_cast<uint8_t>(text[i])) {
      fail(ErrorKind::kFormat, kModule, "bad magic, expected '" + std::string(text) + "'");
    }
  }
}

void BitWriter::write(uint32_t bits, unsigned count) {
  if (count == 0) return;
  const uint64_t masked = count == 32 ? bits : (bits & ((1u << count) - 1));
  acc_ = (acc_ << count) | masked;
  accBits_ += count;
  bitCount_ += count;
  while (accBits_ >= 8) {
    accBits_ -= 8;
    bytes_.push_back(static_cast<uint8_t>(acc_ >> accBits_));
  }
  acc_ &= (uint64_t{1} << accBits_) - 1;
}

std::vector<uint8_t> BitWriter::finish() {
  if (accBits_ > 0) {
    bytes_.push_back(static_cast<uint8_t>(acc_ << (8 - accBits_)));
    acc_ = 0;
    accBits_ = 0;
  }
  return std::move(bytes_);
}

BitReader::BitReader(std::span<const uint8_t> bytes, uint64_t bitCount)
    : bytes_(bytes), bitCount_(bitCount) {
  if (bitCount > bytes.size() * 8) {
    fail(ErrorKind::kFormat, kModule, "bit count exceeds payload size");
  }
}

uint32_t BitReader::bit() {
  if (pos_ >= bitCount_) fail(ErrorKind::kFormat, kModule, "truncated payload");
  const uint32_t b = (bytes_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1u;
  ++pos_;
  return b;
}

uint32_t BitReader::read(unsigned count) {
  if (count == 0) return 0;
  if (remaining() < count) fail(ErrorKind::kFormat, kModule, "truncated payload");
  const uint32_t v = peek(count);
  pos_ += count;
  return v;
}

uint32_t BitReader::peek(unsigned count) const {
  uint64_t v = 0;
  uint64_t p = pos_;
  unsigned got = 0;
  while (got < count) {
    const uint64_t byte = p >> 3;
    const unsigned offset = static_cast<unsigned>(p & 7);
    const unsigned take = std::min(8 - offset, count - got);
    uint32_t chunk = 0;
    if (byte < bytes_.size()) {
      chunk = (bytes_[byte] >> (8 - offset - take)) & ((1u << take) - 1);
    }
    v = (v << take) | chunk;
    got += take;
    p += take;
  }
  return static_cast<uint32_t>(v);
}

void BitReader::skip(unsigned count) {
  if (remaining() < count) fail(ErrorKind::kFormat, kModule, "truncated payload");
  pos_ += count;
}

}  // namespace lfc
