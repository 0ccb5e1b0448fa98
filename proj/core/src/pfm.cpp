#include "lfc/pfm.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <string>

#include "lfc/error.hpp"
#include "lfc/light_field_io.hpp"

namespace lfc {

namespace {

constexpr std::string_view kModule = "pfm";

class HeaderScanner {
 public:
  explicit HeaderScanner(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  std::string token() {
    while (pos_ < bytes_.size() && std::isspace(bytes_[pos_])) ++pos_;
    const size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_])) ++pos_;
    if (start == pos_) fail(ErrorKind::kFormat, kModule, "truncated header");
    return std::string(reinterpret_cast<const char*>(bytes_.data()) + start,
                       pos_ - start);
  }

  // The header ends with exactly one whitespace byte after the scale field.
  size_t payloadOffset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      fail(ErrorKind::kFormat, kModule, "missing separator after header");
    }
    return pos_ + 1;
  }

 private:
  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

size_t parseDimension(const std::string& s) {
  size_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || value == 0) {
    fail(ErrorKind::kFormat, kModule, "bad dimension '" + s + "'");
  }
  return value;
}

double parseScale(const std::string& s) {
  char* end = nullptr;
  const double value = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(value) || value == 0.0) {
    fail(ErrorKind::kFormat, kModule, "bad scale field '" + s + "'");
  }
  return value;
}

}  // namespace

HdrImage decodePfm(std::span<const uint8_t> bytes) {
  HeaderScanner scanner(bytes);
  const std::string magic = scanner.token();
  size_t channels = 0;
  if (magic == "PF") {
    channels = 3;
  } else if (magic == "Pf") {
    channels = 1;
  } else {
    fail(ErrorKind::kFormat, kModule, "bad magic '" + magic.substr(0, 8) + "'");
  }
  const size_t width = parseDimension(scanner.token());
  const size_t height = parseDimension(scanner.token());
  const double scale = parseScale(scanner.token());
  const size_t offset = scanner.payloadOffset();

  const bool littleEndian = scale < 0.0;
  const double magnitude = std::abs(scale);
  const size_t count = width * height * channels;
  if (bytes.size() - offset < count * 4) {
    fail(ErrorKind::kFormat, kModule,
         "truncated payload: need " + std::to_string(count * 4) + " bytes, have " +
             std::to_string(bytes.size() - offset));
  }

  const bool swap = littleEndian != (std::endian::native == std::endian::little);
  std::vector<double> data(count);
  const uint8_t* src = bytes.data() + offset;
  for (size_t row = 0; row < height; ++row) {
    const size_t dstRow = height - 1 - row;
    for (size_t i = 0; i < width * channels; ++i) {
      uint32_t bits;
      std::memcpy(&bits, src + (row * width * channels + i) * 4, 4);
      if (swap) bits = __builtin_bswap32(bits);
      const double v = static_cast<double>(std::bit_cast<float>(bits)) * magnitude;
      if (!std::isfinite(v) || v < 0.0) {
        fail(ErrorKind::kFormat, kModule,
             "sample at row " + std::to_string(dstRow) + " is negative or non-finite");
      }
      data[dstRow * width * channels + i] = v;
    }
  }
  return HdrImage(width, height, channels, std::move(data));
}

std::vector<uint8_t> encodePfm(const HdrImage& img) {
  const std::string header = std::string(img.channels() == 3 ? "PF" : "Pf") + "\n" +
                             std::to_string(img.width()) + " " +
                             std::to_string(img.height()) + "\n-1.0\n";
  const size_t rowSamples = img.width() * img.channels();
  std::vector<uint8_t> out(header.begin(), header.end());
  out.resize(header.size() + img.sampleCount() * 4);
  uint8_t* dst = out.data() + header.size();
  const auto data = img.data();
  for (size_t row = 0; row < img.height(); ++row) {
    const size_t srcRow = img.height() - 1 - row;
    for (size_t i = 0; i < rowSamples; ++i) {
      uint32_t bits = std::bit_cast<uint32_t>(static_cast<float>(data[srcRow * rowSamples + i]));
      if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
      std::memcpy(dst + (row * rowSamples + i) * 4, &bits, 4);
    }
  }
  return out;
}

HdrImage loadPfm(const std::filesystem::path& path) {
  const auto bytes = readFileBytes(path);
  try {
    return decodePfm(bytes);
  } catch (const Error& e) {
    throw Error(e.kind(), kModule, path.string() + ": " + e.what());
  }
}

void savePfm(const HdrImage& img, const std::filesystem::path& path) {
  writeFileBytes(path, encodePfm(img));
}

}  // namespace lfc
