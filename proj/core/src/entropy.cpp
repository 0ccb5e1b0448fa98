#include "lfc/entropy.hpp"

#include <cmath>
#include <algorithm>
#include <numeric>
#include <queue>
#include <string>

#include "lfc/error.hpp"

namespace lfc {

namespace {

constexpr std::string_view kModule = "entropy";

constexpr uint32_t kChannelTagVersion = 1;

uint32_t acSymbol(uint32_t run, unsigned category) { return (run << 5) | category; }

uint32_t mantissaBits(int64_t v, unsigned category) {
  if (category == 0) return 0;
  const int64_t m = v > 0 ? v : v + (int64_t{1} << category) - 1;
  return static_cast<uint32_t>(m);
}

int64_t fromMantissa(uint32_t bits, unsigned category) {
  if (category == 0) return 0;
  if (bits >> (category - 1)) return bits;
  return static_cast<int64_t>(bits) - (int64_t{1} << category) + 1;
}

// One coded symbol and its trailing raw bits.
struct Token {
  bool dc;
  uint16_t symbol;
  uint8_t extraCount;
  uint32_t extraBits;
};

std::vector<uint8_t> limitLengths(const std::vector<uint8_t>& treeLengths,
                                  const std::map<uint32_t, uint64_t>& freqs,
                                  size_t alphabetSize, unsigned maxLength) {
  // Shorten over-long codes while keeping the Kraft sum at 1 (the JPEG
  // Annex K.3 adjustment), then hand the shortest lengths to the most
  // frequent symbols.
  unsigned longest = *std::max_element(treeLengths.begin(), treeLengths.end());
  std::vector<uint32_t> bits(longest + 1, 0);
  for (uint8_t len : treeLengths) {
    if (len) ++bits[len];
  }
  for (unsigned i = longest; i > maxLength; --i) {
    while (bits[i] > 0) {
      unsigned j = i - 2;
      while (bits[j] == 0) --j;
      bits[i] -= 2;
      bits[i - 1] += 1;
      bits[j + 1] += 2;
      bits[j] -= 1;
    }
  }
  std::vector<std::pair<uint64_t, uint32_t>> bySymbol;
  for (const auto& [sym, f] : freqs) {
    if (f > 0) bySymbol.emplace_back(f, sym);
  }
  std::sort(bySymbol.begin(), bySymbol.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<uint8_t> lengths(alphabetSize, 0);
  size_t next = 0;
  for (unsigned len = 1; len <= maxLength; ++len) {
    for (uint32_t k = 0; k < bits[len]; ++k) lengths[bySymbol[next++].second] = static_cast<uint8_t>(len);
  }
  return lengths;
}

}  // namespace

ScanOrder::ScanOrder() {
  std::array<uint16_t, kBlockSize> idx{};
  std::iota(idx.begin(), idx.end(), uint16_t{0});
  auto shell = [](uint16_t i) { return (i >> 9) + ((i >> 6) & 7) + ((i >> 3) & 7) + (i & 7); };
  // Flattened indices already order lexicographically on (k1, k2, k3, k4).
  std::stable_sort(idx.begin(), idx.end(),
                   [&](uint16_t a, uint16_t b) { return shell(a) < shell(b); });
  order_ = idx;
}

const ScanOrder& ScanOrder::zigzag4d() {
  static const ScanOrder order;
  return order;
}

std::vector<int64_t> dpcmEncode(std::span<const int64_t> values) {
  std::vector<int64_t> out(values.size());
  int64_t prev = 0;
  for (size_t i = 0; i < values.size(); ++i) {
    out[i] = values[i] - prev;
    prev = values[i];
  }
  return out;
}

std::vector<int64_t> dpcmDecode(std::span<const int64_t> deltas) {
  std::vector<int64_t> out(deltas.size());
  int64_t prev = 0;
  for (size_t i = 0; i < deltas.size(); ++i) {
    prev += deltas[i];
    out[i] = prev;
  }
  return out;
}

std::vector<RlePair> rleEncode(std::span<const int32_t> ac) {
  std::vector<RlePair> out;
  uint32_t run = 0;
  for (int32_t v : ac) {
    if (v == 0) {
      ++run;
    } else {
      out.push_back({run, v});
      run = 0;
    }
  }
  out.push_back(RlePair::endOfBlock());
  return out;
}

std::vector<int32_t> rleDecode(std::span<const RlePair> pairs, size_t length) {
  std::vector<int32_t> out(length, 0);
  size_t pos = 0;
  for (const RlePair& p : pairs) {
    if (p.isEndOfBlock()) return out;
    if (p.level == 0 || pos + p.run >= length) {
      fail(ErrorKind::kFormat, kModule, "run-length pair overruns the block");
    }
    pos += p.run;
    out[pos++] = p.level;
  }
  fail(ErrorKind::kFormat, kModule, "missing end-of-block sentinel");
}

HuffmanCode HuffmanCode::fromLengths(std::vector<uint8_t> lengths) {
  HuffmanCode code;
  std::vector<uint32_t> order;
  for (uint32_t s = 0; s < lengths.size(); ++s) {
    if (lengths[s] > kMaxCodeLength) fail(ErrorKind::kFormat, kModule, "code length too long");
    if (lengths[s]) order.push_back(s);
  }
  if (order.empty()) fail(ErrorKind::kFormat, kModule, "empty code table");
  std::stable_sort(order.begin(), order.end(),
                   [&](uint32_t a, uint32_t b) { return lengths[a] < lengths[b]; });
  code.codes_.assign(lengths.size(), 0);
  uint64_t next = 0;
  unsigned prevLen = lengths[order[0]];
  for (uint32_t s : order) {
    next <<= (lengths[s] - prevLen);
    prevLen = lengths[s];
    if (next >> prevLen) fail(ErrorKind::kFormat, kModule, "over-subscribed code lengths");
    code.codes_[s] = static_cast<uint32_t>(next);
    ++next;
  }
  code.lengths_ = std::move(lengths);
  return code;
}

unsigned HuffmanCode::maxLength() const noexcept {
  return lengths_.empty() ? 0 : *std::max_element(lengths_.begin(), lengths_.end());
}

double HuffmanCode::kraftSum() const {
  double sum = 0.0;
  for (uint8_t len : lengths_) {
    if (len) sum += std::ldexp(1.0, -static_cast<int>(len));
  }
  return sum;
}

HuffmanCode huffmanBuild(const std::map<uint32_t, uint64_t>& frequencies) {
  std::vector<uint32_t> symbols;
  for (const auto& [sym, f] : frequencies) {
    if (f > 0) symbols.push_back(sym);
  }
  if (symbols.empty()) fail(ErrorKind::kInvalidArgument, kModule, "empty alphabet");
  const size_t alphabet = symbols.back() + 1;
  std::vector<uint8_t> lengths(alphabet, 0);
  if (symbols.size() == 1) {
    lengths[symbols[0]] = 1;
    return HuffmanCode::fromLengths(std::move(lengths));
  }

  struct Node {
    uint64_t weight;
    size_t id;
  };
  auto heavier = [](const Node& a, const Node& b) {
    return a.weight != b.weight ? a.weight > b.weight : a.id > b.id;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(heavier)> heap(heavier);
  std::vector<size_t> parent(symbols.size(), 0);
  for (size_t i = 0; i < symbols.size(); ++i) heap.push({frequencies.at(symbols[i]), i});
  while (heap.size() > 1) {
    const Node a = heap.top();
    heap.pop();
    const Node b = heap.top();
    heap.pop();
    const size_t id = parent.size();
    parent.push_back(0);
    parent[a.id] = id;
    parent[b.id] = id;
    heap.push({a.weight + b.weight, id});
  }
  const size_t root = parent.size() - 1;
  unsigned longest = 0;
  for (size_t i = 0; i < symbols.size(); ++i) {
    unsigned depth = 0;
    for (size_t n = i; n != root; n = parent[n]) ++depth;
    longest = std::max(longest, depth);
    lengths[symbols[i]] = static_cast<uint8_t>(std::min<unsigned>(depth, 255));
  }
  if (longest > kMaxCodeLength) {
    lengths = limitLengths(lengths, frequencies, alphabet, kMaxCodeLength);
  }
  return HuffmanCode::fromLengths(std::move(lengths));
}

HuffmanDecoder::HuffmanDecoder(const HuffmanCode& code) {
  table_.assign(size_t{1} << kLookupBits, Entry{});
  const auto lengths = code.lengths();
  for (uint32_t s = 0; s < lengths.size(); ++s) {
    if (lengths[s]) ++count_[lengths[s]];
  }
  maxLength_ = code.maxLength();
  uint32_t offset = 0;
  for (unsigned len = 1; len <= kMaxCodeLength; ++len) {
    offset_[len] = offset;
    offset += count_[len];
  }
  sortedSymbols_.resize(offset);
  std::array<uint32_t, kMaxCodeLength + 1> fill = offset_;
  for (unsigned len = 1; len <= kMaxCodeLength; ++len) {
    firstCode_[len] = -1;
  }
  for (uint32_t s = 0; s < lengths.size(); ++s) {
    const unsigned len = lengths[s];
    if (!len) continue;
    sortedSymbols_[fill[len]++] = static_cast<uint16_t>(s);
    const uint32_t c = code.code(s);
    if (firstCode_[len] < 0 || c < firstCode_[len]) firstCode_[len] = c;
    if (len <= kLookupBits) {
      const unsigned pad = kLookupBits - len;
      for (uint32_t fillBits = 0; fillBits < (1u << pad); ++fillBits) {
        table_[(c << pad) | fillBits] = {static_cast<uint16_t>(s), static_cast<uint8_t>(len)};
      }
    }
  }
}

uint32_t HuffmanDecoder::decode(BitReader& reader) const {
  const Entry& e = table_[reader.peek(kLookupBits)];
  if (e.length != 0 && e.length <= reader.remaining()) {
    reader.skip(e.length);
    return e.symbol;
  }
  int64_t c = 0;
  for (unsigned len = 1; len <= maxLength_; ++len) {
    c = (c << 1) | reader.bit();
    if (count_[len] && c >= firstCode_[len] && c - firstCode_[len] < count_[len]) {
      return sortedSymbols_[offset_[len] + static_cast<uint32_t>(c - firstCode_[len])];
    }
  }
  fail(ErrorKind::kFormat, kModule, "invalid Huffman code in payload");
}

unsigned magnitudeCategory(int64_t v) {
  uint64_t m = v < 0 ? static_cast<uint64_t>(-v) : static_cast<uint64_t>(v);
  unsigned cat = 0;
  while (m) {
    ++cat;
    m >>= 1;
  }
  return cat;
}

ChannelStream encodeChannel(std::span<const QuantizedBlock> blocks, uint8_t channelId) {
  require(!blocks.empty(), kModule, "no blocks to encode");
  const ScanOrder& scan = ScanOrder::zigzag4d();

  std::vector<int64_t> dc(blocks.size());
  for (size_t b = 0; b < blocks.size(); ++b) dc[b] = blocks[b][scan[0]];
  const std::vector<int64_t> dcDeltas = dpcmEncode(dc);

  std::vector<Token> tokens;
  std::map<uint32_t, uint64_t> dcFreq;
  std::map<uint32_t, uint64_t> acFreq;
  std::vector<int32_t> ac(kBlockSize - 1);
  for (size_t b = 0; b < blocks.size(); ++b) {
    const int64_t delta = dcDeltas[b];
    const unsigned dcCat = magnitudeCategory(delta);
    tokens.push_back({true, static_cast<uint16_t>(dcCat), static_cast<uint8_t>(dcCat),
                      mantissaBits(delta, dcCat)});
    ++dcFreq[dcCat];

    for (size_t i = 1; i < kBlockSize; ++i) {
      const int32_t v = blocks[b][scan[i]];
      if (v > kMaxQuantLevel || v < -kMaxQuantLevel) {
        fail(ErrorKind::kInvalidArgument, kModule, "quantized level out of range");
      }
      ac[i - 1] = v;
    }
    for (const RlePair& p : rleEncode(ac)) {
      if (p.isEndOfBlock()) {
        tokens.push_back({false, kEndOfBlockSymbol, 0, 0});
        ++acFreq[kEndOfBlockSymbol];
        break;
      }
      uint32_t run = p.run;
      while (run > 15) {
        tokens.push_back({false, kZeroRunSymbol, 0, 0});
        ++acFreq[kZeroRunSymbol];
        run -= 16;
      }
      const unsigned cat = magnitudeCategory(p.level);
      const uint32_t sym = acSymbol(run, cat);
      tokens.push_back({false, static_cast<uint16_t>(sym), static_cast<uint8_t>(cat),
                        mantissaBits(p.level, cat)});
      ++acFreq[sym];
    }
  }

  ChannelStream out;
  out.channelId = channelId;
  out.blockCount = static_cast<uint32_t>(blocks.size());
  out.dcCode = huffmanBuild(dcFreq);
  out.acCode = huffmanBuild(acFreq);
  BitWriter writer;
  for (const Token& t : tokens) {
    const HuffmanCode& code = t.dc ? out.dcCode : out.acCode;
    writer.write(code.code(t.symbol), code.length(t.symbol));
    writer.write(t.extraBits, t.extraCount);
  }
  out.payloadBits = writer.bitCount();
  out.payload = writer.finish();
  return out;
}

std::vector<QuantizedBlock> decodeChannel(const ChannelStream& stream) {
  const ScanOrder& scan = ScanOrder::zigzag4d();
  const HuffmanDecoder dcDecoder(stream.dcCode);
  const HuffmanDecoder acDecoder(stream.acCode);
  BitReader reader(stream.payload, stream.payloadBits);
  std::vector<QuantizedBlock> blocks(stream.blockCount);
  int64_t prevDc = 0;
  for (QuantizedBlock& block : blocks) {
    const uint32_t dcCat = dcDecoder.decode(reader);
    if (dcCat >= kDcAlphabetSize) fail(ErrorKind::kFormat, kModule, "bad DC category");
    prevDc += fromMantissa(reader.read(dcCat), dcCat);
    if (prevDc > kMaxQuantLevel || prevDc < -kMaxQuantLevel) {
      fail(ErrorKind::kFormat, kModule, "DC level out of range");
    }
    block[scan[0]] = static_cast<int32_t>(prevDc);

    size_t pos = 1;
    for (;;) {
      const uint32_t sym = acDecoder.decode(reader);
      if (sym == kEndOfBlockSymbol) break;
      if (sym == kZeroRunSymbol) {
        pos += 16;
        if (pos >= kBlockSize) fail(ErrorKind::kFormat, kModule, "zero run overruns block");
        continue;
      }
      const uint32_t run = sym >> 5;
      const unsigned cat = sym & 31;
      if (cat == 0 || cat > 30) fail(ErrorKind::kFormat, kModule, "bad AC symbol");
      pos += run;
      if (pos >= kBlockSize) fail(ErrorKind::kFormat, kModule, "AC run overruns block");
      block[scan[pos++]] = static_cast<int32_t>(fromMantissa(reader.read(cat), cat));
    }
  }
  if (reader.remaining() != 0) {
    fail(ErrorKind::kFormat, kModule, "trailing bits after last block");
  }
  return blocks;
}

void writeHuffmanTable(ByteWriter& out, const HuffmanCode& code) {
  const unsigned maxLen = code.maxLength();
  out.u8(static_cast<uint8_t>(maxLen));
  std::vector<std::vector<uint16_t>> byLength(maxLen + 1);
  const auto lengths = code.lengths();
  for (uint32_t s = 0; s < lengths.size(); ++s) {
    if (lengths[s]) byLength[lengths[s]].push_back(static_cast<uint16_t>(s));
  }
  for (unsigned len = 1; len <= maxLen; ++len) out.u16(static_cast<uint16_t>(byLength[len].size()));
  for (unsigned len = 1; len <= maxLen; ++len) {
    for (uint16_t s : byLength[len]) out.u16(s);
  }
}

HuffmanCode readHuffmanTable(ByteReader& in, uint32_t alphabetSize) {
  const unsigned maxLen = in.u8();
  if (maxLen == 0 || maxLen > kMaxCodeLength) {
    fail(ErrorKind::kFormat, kModule, "bad code table length");
  }
  std::vector<uint32_t> counts(maxLen + 1, 0);
  uint32_t total = 0;
  for (unsigned len = 1; len <= maxLen; ++len) {
    counts[len] = in.u16();
    total += counts[len];
  }
  if (total == 0 || total > alphabetSize) fail(ErrorKind::kFormat, kModule, "bad code table size");
  std::vector<uint8_t> lengths(alphabetSize, 0);
  uint32_t used = 0;
  for (unsigned len = 1; len <= maxLen; ++len) {
    for (uint32_t k = 0; k < counts[len]; ++k) {
      const uint16_t s = in.u16();
      if (s >= alphabetSize || lengths[s] != 0) {
        fail(ErrorKind::kFormat, kModule, "bad symbol in code table");
      }
      lengths[s] = static_cast<uint8_t>(len);
      used = std::max<uint32_t>(used, s + 1u);
    }
  }
  lengths.resize(used);
  return HuffmanCode::fromLengths(std::move(lengths));
}

void writeChannelStream(ByteWriter& out, const ChannelStream& stream) {
  out.tag("CH");
  out.u8(static_cast<uint8_t>(kChannelTagVersion));
  out.u8(stream.channelId);
  out.u32(stream.blockCount);
  writeHuffmanTable(out, stream.dcCode);
  writeHuffmanTable(out, stream.acCode);
  out.u64(stream.payloadBits);
  out.u32(static_cast<uint32_t>(stream.payload.size()));
  out.raw(stream.payload);
}

ChannelStream readChannelStream(ByteReader& in) {
  in.expectTag("CH");
  if (in.u8() != kChannelTagVersion) fail(ErrorKind::kFormat, kModule, "channel version mismatch");
  ChannelStream s;
  s.channelId = in.u8();
  s.blockCount = in.u32();
  s.dcCode = readHuffmanTable(in, kDcAlphabetSize);
  s.acCode = readHuffmanTable(in, kAcAlphabetSize);
  s.payloadBits = in.u64();
  const uint32_t bytes = in.u32();
  if (s.payloadBits > uint64_t{bytes} * 8 || (s.payloadBits + 7) / 8 != bytes) {
    fail(ErrorKind::kFormat, kModule, "payload size disagrees with bit count");
  }
  const auto payload = in.raw(bytes);
  s.payload.assign(payload.begin(), payload.end());
  return s;
}

}  // namespace lfc
