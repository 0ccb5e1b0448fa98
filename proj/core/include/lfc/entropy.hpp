#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "lfc/bitio.hpp"
#include "lfc/transform4d.hpp"

namespace lfc {

// 4-D zig-zag: coefficient indices sorted by k1+k2+k3+k4, ties broken
// lexicographically on (k1, k2, k3, k4).
class ScanOrder {
 public:
  static const ScanOrder& zigzag4d();

  // Block index visited at scan position i.
  uint16_t operator[](size_t i) const { return order_[i]; }
  std::span<const uint16_t> order() const noexcept { return order_; }

 private:
  ScanOrder();
  std::array<uint16_t, kBlockSize> order_{};
};

// First value verbatim, then successive differences.
std::vector<int64_t> dpcmEncode(std::span<const int64_t> values);
std::vector<int64_t> dpcmDecode(std::span<const int64_t> deltas);

// (zeros before, nonzero level); the end-of-block sentinel is (0, 0).
struct RlePair {
  uint32_t run = 0;
  int32_t level = 0;

  bool isEndOfBlock() const noexcept { return run == 0 && level == 0; }
  static constexpr RlePair endOfBlock() { return {}; }
  friend bool operator==(const RlePair&, const RlePair&) = default;
};

// Trailing zeros collapse into the sentinel, which always terminates the list.
std::vector<RlePair> rleEncode(std::span<const int32_t> ac);
std::vector<int32_t> rleDecode(std::span<const RlePair> pairs, size_t length = kBlockSize - 1);

inline constexpr unsigned kMaxCodeLength = 24;

// Canonical prefix code; lengths[symbol] == 0 marks an unused symbol.
class HuffmanCode {
 public:
  HuffmanCode() = default;

  // Canonical codes from a length list; rejects over-subscribed lengths.
  static HuffmanCode fromLengths(std::vector<uint8_t> lengths);

  size_t alphabetSize() const noexcept { return lengths_.size(); }
  unsigned length(size_t symbol) const {
    return symbol < lengths_.size() ? lengths_[symbol] : 0;
  }
  uint32_t code(size_t symbol) const { return codes_[symbol]; }
  std::span<const uint8_t> lengths() const noexcept { return lengths_; }
  unsigned maxLength() const noexcept;
  double kraftSum() const;

  friend bool operator==(const HuffmanCode& a, const HuffmanCode& b) {
    return a.lengths_ == b.lengths_;
  }

 private:
  std::vector<uint8_t> lengths_;
  std::vector<uint32_t> codes_;
};

// Huffman code for the given symbol counts. A lone symbol gets a 1-bit code;
// lengths are capped at kMaxCodeLength.
HuffmanCode huffmanBuild(const std::map<uint32_t, uint64_t>& frequencies);

class HuffmanDecoder {
 public:
  explicit HuffmanDecoder(const HuffmanCode& code);
  uint32_t decode(BitReader& reader) const;

 private:
  static constexpr unsigned kLookupBits = 10;
  struct Entry {
    uint16_t symbol = 0;
    uint8_t length = 0;
  };
  std::vector<Entry> table_;
  std::vector<uint16_t> sortedSymbols_;
  std::array<int64_t, kMaxCodeLength + 1> firstCode_{};
  std::array<uint32_t, kMaxCodeLength + 1> count_{};
  std::array<uint32_t, kMaxCodeLength + 1> offset_{};
  unsigned maxLength_ = 0;
};

// JPEG-style magnitude classes: category = bit length of |v|, followed by
// `category` mantissa bits (one's complement for negatives).
unsigned magnitudeCategory(int64_t v);

inline constexpr uint32_t kDcAlphabetSize = 32;
inline constexpr uint32_t kAcAlphabetSize = 512;
inline constexpr uint32_t kEndOfBlockSymbol = 0x000;  // (run 0, category 0)
inline constexpr uint32_t kZeroRunSymbol = 0x1E0;     // (run 15, category 0): 16 zeros

// Entropy-coded quantized blocks of one plane.
struct ChannelStream {
  uint8_t channelId = 0;
  uint32_t blockCount = 0;
  HuffmanCode dcCode;
  HuffmanCode acCode;
  uint64_t payloadBits = 0;
  std::vector<uint8_t> payload;
};

ChannelStream encodeChannel(std::span<const QuantizedBlock> blocks, uint8_t channelId = 0);
std::vector<QuantizedBlock> decodeChannel(const ChannelStream& stream);

// Canonical length list: u8 max length, u16 count per length 1..max, then
// u16 symbols in (length, symbol) order.
void writeHuffmanTable(ByteWriter& out, const HuffmanCode& code);
HuffmanCode readHuffmanTable(ByteReader& in, uint32_t alphabetSize);

void writeChannelStream(ByteWriter& out, const ChannelStream& stream);
ChannelStream readChannelStream(ByteReader& in);

}  // namespace lfc
