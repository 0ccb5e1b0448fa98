#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lfc/image.hpp"

namespace lfc {

// Portable Float Map. "PF" = 3 channels, "Pf" = 1 channel; the sign of the
// scale field selects endianness (negative = little-endian); rows are stored
// bottom-up on disk and top-down in memory.
HdrImage decodePfm(std::span<const uint8_t> bytes);
std::vector<uint8_t> encodePfm(const HdrImage& img);

HdrImage loadPfm(const std::filesystem::path& path);
void savePfm(const HdrImage& img, const std::filesystem::path& path);

}  // namespace lfc
