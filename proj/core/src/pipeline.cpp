#include "lfc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lfc/entropy.hpp"
#include "lfc/error.hpp"

namespace lfc {

namespace {

constexpr std::string_view kModule = "pipeline";

uint32_t codeMax(int bitDepth) { return (uint32_t{1} << bitDepth) - 1; }

// Planes entering the transform are normalised to [0, 1].
std::vector<std::vector<double>> framePlanes(const PerceptualFrame& f) {
  std::vector<std::vector<double>> planes;
  const double maxCode = f.meta.ptf.maxCode();
  std::vector<double> intensity(f.intensityCode.size());
  for (size_t i = 0; i < intensity.size(); ++i) intensity[i] = f.intensityCode[i] / maxCode;
  planes.push_back(std::move(intensity));
  if (f.meta.planes == 3) {
    const double k = codeMax(f.meta.bitDepth);
    for (const auto& codes : f.chromaCode) {
      std::vector<double> p(codes.size());
      for (size_t i = 0; i < p.size(); ++i) p[i] = codes[i] / k;
      planes.push_back(std::move(p));
    }
  }
  return planes;
}

PerceptualFrame frameFromPlanes(const std::vector<std::vector<double>>& planes,
                                const FrameMetadata& meta, size_t width, size_t height) {
  PerceptualFrame f;
  f.width = width;
  f.height = height;
  f.meta = meta;
  const double maxCode = meta.ptf.maxCode();
  f.intensityCode.resize(planes[0].size());
  for (size_t i = 0; i < planes[0].size(); ++i) f.intensityCode[i] = planes[0][i] * maxCode;
  if (meta.planes == 3) {
    const uint32_t kmax = codeMax(meta.bitDepth);
    for (size_t c = 0; c < 2; ++c) {
      const auto& p = planes[c + 1];
      auto& codes = f.chromaCode[c];
      codes.resize(p.size());
      for (size_t i = 0; i < p.size(); ++i) {
        const double v = std::round(p[i] * kmax);
        codes[i] = v <= 0.0 ? 0u : (v >= kmax ? kmax : static_cast<uint32_t>(v));
      }
    }
  }
  return f;
}

}  // namespace

std::vector<AperturePattern> PatternSpec::resolve(size_t rows, size_t cols) const {
  if (!explicitPatterns.empty()) return explicitPatterns;
  return makePatterns(kind, count, rows, cols, seed);
}

BasisMode parseBasisMode(std::string_view name) {
  if (name == "none") return BasisMode::kNone;
  if (name == "pca") return BasisMode::kPca;
  fail(ErrorKind::kInvalidArgument, kModule, "unknown basis mode '" + std::string(name) + "'");
}

std::string_view basisModeName(BasisMode mode) {
  return mode == BasisMode::kPca ? "pca" : "none";
}

std::vector<QuantizedBlock> transformCodePlane(std::span<const double> plane, size_t width,
                                               size_t height, const QuantMatrix& q) {
  const Volume4D vol = fold2dTo4d(plane, width, height);
  std::vector<QuantizedBlock> out;
  for (const Block4D& b : volumeToBlocks(vol)) out.push_back(quantize(dct4d(b), q));
  return out;
}

std::vector<double> transformDecodePlane(std::span<const QuantizedBlock> blocks, size_t width,
                                         size_t height, const QuantMatrix& q) {
  std::vector<Block4D> spatial;
  spatial.reserve(blocks.size());
  for (const QuantizedBlock& b : blocks) spatial.push_back(idct4d(dequantize(b, q)));
  return unfold4dTo2d(blocksToVolume(spatial, width, height));
}

std::vector<uint8_t> encodeAcquisition(const AcquisitionSet& acq, const EncodeOptions& options,
                                       const std::optional<ViewBasis>& basis,
                                       std::vector<PerceptualFrame>* frames) {
  require(!acq.images.empty(), kModule, "nothing to encode");
  const HdrImage& first = acq.images[0];
  const size_t planes = first.channels();
  require(acq.images.size() * planes <= 255, kModule, "too many acquired images for one file");
  require(acq.images.size() <= 65535 && first.width() <= 0xFFFFFFFFu &&
              first.height() <= 0xFFFFFFFFu,
          kModule, "image geometry too large");
  const QuantMatrix q = distortionToQuant(options.dLevel, options.baseStep);

  Container c;
  ContainerHeader& h = c.header;
  h.width = static_cast<uint32_t>(first.width());
  h.height = static_cast<uint32_t>(first.height());
  h.planes = static_cast<uint8_t>(planes);
  h.frames = static_cast<uint16_t>(acq.images.size());
  h.rows = static_cast<uint16_t>(acq.patterns[0].rows());
  h.cols = static_cast<uint16_t>(acq.patterns[0].cols());
  h.dLevel = static_cast<uint8_t>(options.dLevel);
  h.bitDepth = static_cast<uint8_t>(options.perceptual.bitDepth);
  h.quantStep = q.divisor(0);
  h.ridge = options.ridge;
  h.paddedWidth = static_cast<uint32_t>(paddedExtent(first.width()));
  h.paddedHeight = static_cast<uint32_t>(paddedExtent(first.height()));
  h.blocksPerPlane = (h.paddedWidth / kTileEdge) * (h.paddedHeight / kTileEdge);
  c.patterns = acq.patterns;
  c.basis = basis;

  uint8_t channelId = 0;
  for (const HdrImage& img : acq.images) {
    require(img.sameShape(first), kModule, "acquired images differ in shape");
    PerceptualFrame frame = perceptualEncode(img, options.perceptual);
    for (const auto& plane : framePlanes(frame)) {
      const auto blocks = transformCodePlane(plane, img.width(), img.height(), q);
      c.channels.push_back(encodeChannel(blocks, channelId++));
    }
    c.frames.push_back(frame.meta);
    if (frames) frames->push_back(std::move(frame));
  }
  return writeContainer(c);
}

EncodeResult encodeLightField(const LightField4D& lf, const EncodeOptions& options) {
  EncodeResult out;
  const auto patterns = options.patterns.resolve(lf.angularRows(), lf.angularCols());
  out.acquisition = acquire(lf, patterns);
  if (options.basis == BasisMode::kPca) {
    out.basis = learnViewBasis(lf, out.acquisition.count());
  }
  out.quantStep = distortionToQuant(options.dLevel, options.baseStep).divisor(0);
  out.bytes = encodeAcquisition(out.acquisition, options, out.basis, &out.frames);
  return out;
}

AcquisitionSet decodeAcquisition(const Container& c, size_t* clampCount) {
  const ContainerHeader& h = c.header;
  const QuantMatrix q = QuantMatrix::uniform(h.quantStep);
  AcquisitionSet acq;
  acq.patterns = c.patterns;
  size_t stream = 0;
  for (size_t n = 0; n < h.frames; ++n) {
    std::vector<std::vector<double>> planes;
    for (size_t p = 0; p < h.planes; ++p) {
      const auto blocks = decodeChannel(c.channels[stream++]);
      planes.push_back(transformDecodePlane(blocks, h.width, h.height, q));
    }
    const PerceptualFrame frame = frameFromPlanes(planes, c.frames[n], h.width, h.height);
    acq.images.push_back(perceptualDecode(frame, clampCount));
  }
  return acq;
}

DecodeResult decodeLightField(std::span<const uint8_t> bytes) {
  const Container c = readContainer(bytes);
  DecodeResult out;
  out.header = c.header;
  out.basis = c.basis;
  out.metadata = c.frames;
  out.acquisition = decodeAcquisition(c, &out.clampedSamples);
  out.lightField = reconstructLinear(out.acquisition, c.header.ridge,
                                     out.basis ? &*out.basis : nullptr);
  return out;
}

}  // namespace lfc
