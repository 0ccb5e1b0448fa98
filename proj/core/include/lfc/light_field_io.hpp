#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include "lfc/image.hpp"

namespace lfc {

// Which views of a larger on-disk grid to load: view (s, t) of the result is
// file (firstRow + s*step, firstCol + t*step).
struct ViewSelection {
  size_t firstRow = 0;
  size_t firstCol = 0;
  size_t step = 1;
};

// Replaces every "{s}" and "{t}" in the template with the indices.
std::string formatViewPath(const std::string& pathTemplate, size_t s, size_t t);

LightField4D loadLightField(const std::string& pathTemplate, size_t rows, size_t cols,
                            const ViewSelection& selection = {});
void saveLightField(const LightField4D& lf, const std::string& pathTemplate);

std::vector<uint8_t> readFileBytes(const std::filesystem::path& path);
void writeFileBytes(const std::filesystem::path& path, std::span<const uint8_t> bytes);

}  // namespace lfc
