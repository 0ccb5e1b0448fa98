#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lfc/aperture.hpp"
#include "lfc/perceptual.hpp"

namespace lfc {

// One acquired image as integer planes for an external video encoder:
// intensity (PTF code scaled to the bit depth) and the P/T chroma codes,
// optionally 2x2-subsampled (4:2:0).
struct ExportedFrame {
  size_t width = 0;
  size_t height = 0;
  bool chroma420 = false;
  FrameMetadata meta;
  std::vector<uint16_t> intensity;
  std::array<std::vector<uint16_t>, 2> chroma;

  size_t chromaWidth() const noexcept { return chroma420 ? (width + 1) / 2 : width; }
  size_t chromaHeight() const noexcept { return chroma420 ? (height + 1) / 2 : height; }

  friend bool operator==(const ExportedFrame&, const ExportedFrame&) = default;
};

ExportedFrame exportFrame(const PerceptualFrame& frame, bool chroma420);
// Chroma is upsampled by co-sited replication.
PerceptualFrame importFrame(const ExportedFrame& frame);

// <base>.yuv holds the planes as little-endian u16, planar; <base>.meta.txt
// holds geometry and the frame metadata as key=value lines.
void writeExportedFrame(const ExportedFrame& frame, const std::filesystem::path& base);
ExportedFrame readExportedFrame(const std::filesystem::path& base);

FrameMetadata parseMetadata(const std::string& text, size_t frameIndex);

// Writes frame_<n>.{yuv,meta.txt} and pattern_<n>.txt for every acquired image.
std::vector<ExportedFrame> exportAcquisition(const AcquisitionSet& acq,
                                             const PerceptualOptions& options, bool chroma420,
                                             const std::filesystem::path& dir);
// Reads an export directory back into acquired images plus their patterns.
AcquisitionSet importAcquisition(const std::filesystem::path& dir,
                                 std::vector<ExportedFrame>* frames = nullptr);

}  // namespace lfc
