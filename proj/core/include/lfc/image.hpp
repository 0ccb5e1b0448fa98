#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lfc {

// Linear-light, scene-referred image. Samples are row-major and
// channel-interleaved; every sample is finite and non-negative.
class HdrImage {
 public:
  HdrImage() = default;
  HdrImage(size_t width, size_t height, size_t channels);
  HdrImage(size_t width, size_t height, size_t channels, std::vector<double> data);

  size_t width() const noexcept { return width_; }
  size_t height() const noexcept { return height_; }
  size_t channels() const noexcept { return channels_; }
  size_t pixelCount() const noexcept { return width_ * height_; }
  size_t sampleCount() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const double> data() const noexcept { return data_; }

  double at(size_t x, size_t y, size_t c = 0) const {
    return data_[(y * width_ + x) * channels_ + c];
  }

  // One channel as a contiguous row-major plane.
  std::vector<double> plane(size_t c) const;

  static HdrImage fromPlanes(size_t width, size_t height,
                             std::span<const std::vector<double>> planes);

  bool sameShape(const HdrImage& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_ &&
           channels_ == other.channels_;
  }

  friend bool operator==(const HdrImage&, const HdrImage&) = default;

 private:
  size_t width_ = 0;
  size_t height_ = 0;
  size_t channels_ = 0;
  std::vector<double> data_;
};

// S x T grid of sub-aperture views l_{s,t}(u,v), stored row-major
// (s = angular row, t = angular column).
class LightField4D {
 public:
  LightField4D() = default;
  LightField4D(size_t rows, size_t cols, std::vector<HdrImage> views);

  size_t angularRows() const noexcept { return rows_; }
  size_t angularCols() const noexcept { return cols_; }
  size_t viewCount() const noexcept { return views_.size(); }
  size_t width() const noexcept { return views_.empty() ? 0 : views_[0].width(); }
  size_t height() const noexcept { return views_.empty() ? 0 : views_[0].height(); }
  size_t channels() const noexcept {
    return views_.empty() ? 0 : views_[0].channels();
  }

  const HdrImage& view(size_t s, size_t t) const { return views_[s * cols_ + t]; }
  const HdrImage& view(size_t index) const { return views_[index]; }
  std::span<const HdrImage> views() const noexcept { return views_; }

  double maxSample() const;

  friend bool operator==(const LightField4D&, const LightField4D&) = default;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<HdrImage> views_;
};

}  // namespace lfc
