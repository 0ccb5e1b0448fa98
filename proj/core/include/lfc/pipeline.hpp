#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lfc/aperture.hpp"
#include "lfc/container.hpp"
#include "lfc/perceptual.hpp"
#include "lfc/transform4d.hpp"

namespace lfc {

struct PatternSpec {
  PatternKind kind = PatternKind::kUniformRandom;
  size_t count = 2;
  uint64_t seed = 1;
  // When non-empty these are used verbatim and the fields above are ignored.
  std::vector<AperturePattern> explicitPatterns;

  std::vector<AperturePattern> resolve(size_t rows, size_t cols) const;
};

enum class BasisMode { kNone, kPca };

BasisMode parseBasisMode(std::string_view name);
std::string_view basisModeName(BasisMode mode);

struct EncodeOptions {
  PatternSpec patterns;
  int dLevel = 1;
  double baseStep = kDefaultBaseStep;
  double ridge = kDefaultRidge;
  BasisMode basis = BasisMode::kNone;
  PerceptualOptions perceptual;
};

struct EncodeResult {
  std::vector<uint8_t> bytes;
  AcquisitionSet acquisition;
  std::vector<PerceptualFrame> frames;
  std::optional<ViewBasis> basis;
  double quantStep = 0.0;
};

// acquire -> IPT/PTF/lambda -> fold -> 4D-DCT -> quantize -> entropy -> .lfc4
EncodeResult encodeLightField(const LightField4D& lf, const EncodeOptions& options);

// Same chain starting from already-acquired images.
std::vector<uint8_t> encodeAcquisition(const AcquisitionSet& acq, const EncodeOptions& options,
                                       const std::optional<ViewBasis>& basis,
                                       std::vector<PerceptualFrame>* frames = nullptr);

struct DecodeResult {
  ContainerHeader header;
  AcquisitionSet acquisition;
  LightField4D lightField;
  std::optional<ViewBasis> basis;
  std::vector<FrameMetadata> metadata;
  size_t clampedSamples = 0;
};

// .lfc4 -> entropy decode -> dequantize -> inverse 4D-DCT -> unfold ->
// inverse PTF/lambda -> IPT->RGB -> linear reconstruction.
DecodeResult decodeLightField(std::span<const uint8_t> bytes);

// Decodes only the acquired images of a parsed container.
AcquisitionSet decodeAcquisition(const Container& container, size_t* clampCount = nullptr);

// Quantized 4-D blocks of one plane (values nominally in [0, 1]).
std::vector<QuantizedBlock> transformCodePlane(std::span<const double> plane, size_t width,
                                               size_t height, const QuantMatrix& q);
std::vector<double> transformDecodePlane(std::span<const QuantizedBlock> blocks, size_t width,
                                         size_t height, const QuantMatrix& q);

}  // namespace lfc
