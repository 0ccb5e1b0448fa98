#include "lfc/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lfc/error.hpp"

namespace lfc {

namespace {
constexpr std::string_view kModule = "lf-model";
}

HdrImage::HdrImage(size_t width, size_t height, size_t channels)
    : HdrImage(width, height, channels,
               std::vector<double>(width * height * channels, 0.0)) {}

HdrImage::HdrImage(size_t width, size_t height, size_t channels,
                   std::vector<double> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  require(channels == 1 || channels == 3, kModule,
          "channel count must be 1 or 3, got " + std::to_string(channels));
  require(data_.size() == width * height * channels, kModule,
          "sample count does not match " + std::to_string(width) + "x" +
              std::to_string(height) + "x" + std::to_string(channels));
  for (size_t i = 0; i < data_.size(); ++i) {
    const double v = data_[i];
    if (!std::isfinite(v) || v < 0.0) {
      fail(ErrorKind::kInvalidArgument, kModule,
           "sample " + std::to_string(i) + " is negative or non-finite");
    }
  }
}

std::vector<double> HdrImage::plane(size_t c) const {
  std::vector<double> out(pixelCount());
  for (size_t i = 0; i < out.size(); ++i) out[i] = data_[i * channels_ + c];
  return out;
}

HdrImage HdrImage::fromPlanes(size_t width, size_t height,
                              std::span<const std::vector<double>> planes) {
  const size_t channels = planes.size();
  std::vector<double> data(width * height * channels);
  for (size_t c = 0; c < channels; ++c) {
    require(planes[c].size() == width * height, kModule, "plane size mismatch");
    for (size_t i = 0; i < width * height; ++i) data[i * channels + c] = planes[c][i];
  }
  return HdrImage(width, height, channels, std::move(data));
}

LightField4D::LightField4D(size_t rows, size_t cols, std::vector<HdrImage> views)
    : rows_(rows), cols_(cols), views_(std::move(views)) {
  require(rows > 0 && cols > 0, kModule, "angular grid must be non-empty");
  require(views_.size() == rows * cols, kModule,
          "expected " + std::to_string(rows * cols) + " views, got " +
              std::to_string(views_.size()));
  for (size_t i = 1; i < views_.size(); ++i) {
    if (!views_[i].sameShape(views_[0])) {
      fail(ErrorKind::kInvalidArgument, kModule,
           "view (" + std::to_string(i / cols) + "," + std::to_string(i % cols) +
               ") dimensions differ from view (0,0)");
    }
  }
}

double LightField4D::maxSample() const {
  double peak = 0.0;
  for (const auto& v : views_) {
    for (double s : v.data()) peak = std::max(peak, s);
  }
  return peak;
}

}  // namespace lfc
