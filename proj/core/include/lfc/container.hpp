#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lfc/aperture.hpp"
#include "lfc/entropy.hpp"
#include "lfc/perceptual.hpp"

namespace lfc {

inline constexpr uint8_t kContainerVersion = 1;

struct ContainerHeader {
  uint32_t width = 0;
  uint32_t height = 0;
  uint8_t planes = 3;
  uint16_t frames = 0;
  uint16_t rows = 0;
  uint16_t cols = 0;
  uint8_t dLevel = 1;
  uint8_t bitDepth = 10;
  double quantStep = 0.0;
  double ridge = 0.0;
  uint32_t paddedWidth = 0;
  uint32_t paddedHeight = 0;
  uint32_t blocksPerPlane = 0;

  friend bool operator==(const ContainerHeader&, const ContainerHeader&) = default;
};

// A complete .lfc4 file: acquisition geometry, per-frame metadata and one
// entropy-coded stream per (frame, plane), frame-major.
struct Container {
  ContainerHeader header;
  std::vector<AperturePattern> patterns;
  std::optional<ViewBasis> basis;
  std::vector<FrameMetadata> frames;
  std::vector<ChannelStream> channels;
};

std::vector<uint8_t> writeContainer(const Container& container);
Container readContainer(std::span<const uint8_t> bytes);

void writeFrameMetadata(ByteWriter& out, const FrameMetadata& meta);
FrameMetadata readFrameMetadata(ByteReader& in);

}  // namespace lfc
