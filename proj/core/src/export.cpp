#include "lfc/export.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "lfc/bitio.hpp"
#include "lfc/error.hpp"
#include "lfc/light_field_io.hpp"

namespace lfc {

namespace {

constexpr std::string_view kModule = "export";

uint16_t toCode(double v, uint32_t kmax) {
  const double r = std::round(v);
  if (r <= 0.0) return 0;
  if (r >= kmax) return static_cast<uint16_t>(kmax);
  return static_cast<uint16_t>(r);
}

std::vector<uint16_t> poolChroma(const std::vector<uint32_t>& codes, size_t w, size_t h) {
  const size_t cw = (w + 1) / 2;
  const size_t ch = (h + 1) / 2;
  std::vector<uint16_t> out(cw * ch);
  for (size_t y = 0; y < ch; ++y) {
    for (size_t x = 0; x < cw; ++x) {
      uint32_t sum = 0;
      uint32_t n = 0;
      for (size_t dy = 0; dy < 2; ++dy) {
        for (size_t dx = 0; dx < 2; ++dx) {
          const size_t sy = 2 * y + dy;
          const size_t sx = 2 * x + dx;
          if (sy < h && sx < w) {
            sum += codes[sy * w + sx];
            ++n;
          }
        }
      }
      out[y * cw + x] = static_cast<uint16_t>((sum + n / 2) / n);
    }
  }
  return out;
}

std::map<std::string, std::string> parseKeyValues(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorKind::kFormat, kModule, "bad metadata line: " + line);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

double number(const std::map<std::string, std::string>& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) fail(ErrorKind::kFormat, kModule, "metadata is missing '" + key + "'");
  char* end = nullptr;
  const double v = std::strtod(it->second.c_str(), &end);
  if (end == it->second.c_str()) fail(ErrorKind::kFormat, kModule, "bad value for '" + key + "'");
  return v;
}

std::string readText(const std::filesystem::path& path) {
  const auto bytes = readFileBytes(path);
  return std::string(bytes.begin(), bytes.end());
}

}  // namespace

ExportedFrame exportFrame(const PerceptualFrame& frame, bool chroma420) {
  const uint32_t kmax = (uint32_t{1} << frame.meta.bitDepth) - 1;
  ExportedFrame out;
  out.width = frame.width;
  out.height = frame.height;
  out.chroma420 = chroma420;
  out.meta = frame.meta;
  const double toUnit = 1.0 / frame.meta.ptf.maxCode();
  out.intensity.resize(frame.intensityCode.size());
  for (size_t i = 0; i < out.intensity.size(); ++i) {
    out.intensity[i] = toCode(frame.intensityCode[i] * toUnit * kmax, kmax);
  }
  if (frame.meta.planes == 3) {
    for (size_t c = 0; c < 2; ++c) {
      const auto& codes = frame.chromaCode[c];
      if (chroma420) {
        out.chroma[c] = poolChroma(codes, frame.width, frame.height);
      } else {
        out.chroma[c].assign(codes.begin(), codes.end());
      }
    }
  }
  return out;
}

PerceptualFrame importFrame(const ExportedFrame& frame) {
  const uint32_t kmax = (uint32_t{1} << frame.meta.bitDepth) - 1;
  PerceptualFrame out;
  out.width = frame.width;
  out.height = frame.height;
  out.meta = frame.meta;
  const double maxCode = frame.meta.ptf.maxCode();
  out.intensityCode.resize(frame.intensity.size());
  for (size_t i = 0; i < frame.intensity.size(); ++i) {
    out.intensityCode[i] = static_cast<double>(frame.intensity[i]) / kmax * maxCode;
  }
  if (frame.meta.planes == 3) {
    const size_t cw = frame.chromaWidth();
    for (size_t c = 0; c < 2; ++c) {
      auto& codes = out.chromaCode[c];
      codes.resize(frame.width * frame.height);
      for (size_t y = 0; y < frame.height; ++y) {
        for (size_t x = 0; x < frame.width; ++x) {
          const size_t src = frame.chroma420 ? (y / 2) * cw + x / 2 : y * frame.width + x;
          codes[y * frame.width + x] = frame.chroma[c][src];
        }
      }
    }
  }
  return out;
}

FrameMetadata parseMetadata(const std::string& text, size_t frameIndex) {
  const auto kv = parseKeyValues(text);
  const std::string p = "frame" + std::to_string(frameIndex) + ".";
  FrameMetadata meta;
  meta.bitDepth = static_cast<int>(number(kv, p + "bit_depth"));
  meta.planes = static_cast<uint8_t>(number(kv, p + "planes"));
  const auto prim = kv.find(p + "primaries");
  if (prim == kv.end()) fail(ErrorKind::kFormat, kModule, "metadata is missing primaries");
  meta.primaries = parsePrimaries(prim->second);
  meta.ptf = PtfParams::fromAnchors(number(kv, p + "ptf.a"), number(kv, p + "ptf.c"),
                                    number(kv, p + "ptf.low_break"),
                                    number(kv, p + "ptf.mid_break"),
                                    number(kv, p + "ptf.high_break"));
  meta.intensity.offset = number(kv, p + "intensity.offset");
  meta.intensity.scale = number(kv, p + "intensity.scale");
  if (meta.planes == 3) {
    const char* names[2] = {"protan", "tritan"};
    for (size_t c = 0; c < 2; ++c) {
      const std::string q = p + names[c];
      meta.chroma[c].lambda = number(kv, q + ".lambda");
      meta.chroma[c].min = number(kv, q + ".min");
      meta.chroma[c].max = number(kv, q + ".max");
      meta.chroma[c].objective = number(kv, q + ".objective");
    }
  }
  validateBitDepth(meta.bitDepth);
  return meta;
}

void writeExportedFrame(const ExportedFrame& frame, const std::filesystem::path& base) {
  ByteWriter planes;
  for (uint16_t v : frame.intensity) planes.u16(v);
  if (frame.meta.planes == 3) {
    for (const auto& c : frame.chroma) {
      for (uint16_t v : c) planes.u16(v);
    }
  }
  writeFileBytes(base.string() + ".yuv", planes.bytes());
  std::string meta = "width=" + std::to_string(frame.width) + "\nheight=" +
                     std::to_string(frame.height) + "\nchroma420=" +
                     (frame.chroma420 ? "1" : "0") + "\n" + formatMetadata(frame.meta, 0);
  writeFileBytes(base.string() + ".meta.txt",
                 std::span(reinterpret_cast<const uint8_t*>(meta.data()), meta.size()));
}

ExportedFrame readExportedFrame(const std::filesystem::path& base) {
  const std::string text = readText(base.string() + ".meta.txt");
  const auto kv = parseKeyValues(text);
  ExportedFrame frame;
  frame.width = static_cast<size_t>(number(kv, "width"));
  frame.height = static_cast<size_t>(number(kv, "height"));
  frame.chroma420 = number(kv, "chroma420") != 0.0;
  frame.meta = parseMetadata(text, 0);
  require(frame.width > 0 && frame.height > 0, kModule, "bad exported geometry");

  const auto bytes = readFileBytes(base.string() + ".yuv");
  ByteReader in(bytes);
  const uint32_t kmax = (uint32_t{1} << frame.meta.bitDepth) - 1;
  auto readPlane = [&](size_t count) {
    std::vector<uint16_t> plane(count);
    for (uint16_t& v : plane) {
      v = in.u16();
      if (v > kmax) fail(ErrorKind::kFormat, kModule, "sample exceeds bit depth");
    }
    return plane;
  };
  frame.intensity = readPlane(frame.width * frame.height);
  if (frame.meta.planes == 3) {
    for (auto& c : frame.chroma) c = readPlane(frame.chromaWidth() * frame.chromaHeight());
  }
  if (in.remaining() != 0) fail(ErrorKind::kFormat, kModule, "plane file has trailing bytes");
  return frame;
}

std::vector<ExportedFrame> exportAcquisition(const AcquisitionSet& acq,
                                             const PerceptualOptions& options, bool chroma420,
                                             const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<ExportedFrame> frames;
  for (size_t n = 0; n < acq.images.size(); ++n) {
    frames.push_back(exportFrame(perceptualEncode(acq.images[n], options), chroma420));
    writeExportedFrame(frames.back(), dir / ("frame_" + std::to_string(n)));
    savePatternFile(acq.patterns[n], dir / ("pattern_" + std::to_string(n) + ".txt"));
  }
  return frames;
}

AcquisitionSet importAcquisition(const std::filesystem::path& dir,
                                 std::vector<ExportedFrame>* frames) {
  AcquisitionSet acq;
  for (size_t n = 0;; ++n) {
    const auto base = dir / ("frame_" + std::to_string(n));
    if (!std::filesystem::exists(base.string() + ".meta.txt")) break;
    ExportedFrame f = readExportedFrame(base);
    acq.images.push_back(perceptualDecode(importFrame(f)));
    acq.patterns.push_back(loadPatternFile(dir / ("pattern_" + std::to_string(n) + ".txt")));
    if (frames) frames->push_back(std::move(f));
  }
  if (acq.images.empty()) {
    fail(ErrorKind::kIo, kModule, "no exported frames in " + dir.string());
  }
  return acq;
}

}  // namespace lfc
