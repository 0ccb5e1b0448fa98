#include "lfc/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lfc/error.hpp"
#include "lfc/rng.hpp"

namespace lfc {

namespace {

constexpr std::string_view kModule = "synthetic";

// Sum of a few random low-frequency plane waves, rescaled to [-1, 1].
std::vector<double> smoothField(size_t width, size_t height, Rng& rng, int waves,
                                double maxCycles) {
  struct Wave {
    double fx, fy, phase, amp;
  };
  std::vector<Wave> ws;
  for (int i = 0; i < waves; ++i) {
    ws.push_back({rng.uniform(-maxCycles, maxCycles), rng.uniform(-maxCycles, maxCycles),
                  rng.uniform(0.0, 2.0 * std::numbers::pi), rng.uniform(0.3, 1.0)});
  }
  std::vector<double> f(width * height);
  double lo = 1e300, hi = -1e300;
  for (size_t y = 0; y < height; ++y) {
    for (size_t x = 0; x < width; ++x) {
      const double u = static_cast<double>(x) / static_cast<double>(width);
      const double v = static_cast<double>(y) / static_cast<double>(height);
      double s = 0.0;
      for (const Wave& w : ws) {
        s += w.amp * std::cos(2.0 * std::numbers::pi * (w.fx * u + w.fy * v) + w.phase);
      }
      f[y * width + x] = s;
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
  }
  const double span = hi > lo ? hi - lo : 1.0;
  for (double& s : f) s = 2.0 * (s - lo) / span - 1.0;
  return f;
}

}  // namespace

HdrImage makeNaturalImage(size_t width, size_t height, size_t channels, uint64_t seed) {
  require(width > 0 && height > 0, kModule, "empty image");
  Rng rng(seed);
  const auto logLum = smoothField(width, height, rng, 6, 3.0);
  const auto texture = smoothField(width, height, rng, 8, 24.0);
  const double center = rng.uniform(-0.5, 0.5);
  std::vector<std::vector<double>> tint;
  if (channels == 3) {
    for (int c = 0; c < 3; ++c) tint.push_back(smoothField(width, height, rng, 4, 2.0));
  }
  std::vector<double> data(width * height * channels);
  for (size_t i = 0; i < width * height; ++i) {
    const double y = std::pow(10.0, center + 1.5 * logLum[i]) * (1.0 + 0.08 * texture[i]);
    if (channels == 1) {
      data[i] = y;
    } else {
      for (size_t c = 0; c < 3; ++c) data[i * 3 + c] = y * (1.0 + 0.45 * tint[c][i]);
    }
  }
  return HdrImage(width, height, channels, std::move(data));
}

MixtureLightField makeMixtureLightField(size_t rows, size_t cols, size_t width, size_t height,
                                        size_t channels, size_t rank, uint64_t seed) {
  require(rank >= 1, kModule, "rank must be >= 1");
  Rng rng(seed);
  MixtureLightField out;
  for (size_t k = 0; k < rank; ++k) {
    out.basisImages.push_back(makeNaturalImage(width, height, channels, rng.next()));
  }
  const size_t views = rows * cols;
  out.weights.resize(static_cast<Eigen::Index>(views), static_cast<Eigen::Index>(rank));
  std::vector<HdrImage> images;
  for (size_t m = 0; m < views; ++m) {
    std::vector<double> data(width * height * channels, 0.0);
    for (size_t k = 0; k < rank; ++k) {
      const double w = rng.uniform(0.2, 1.0);
      out.weights(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) = w;
      const auto src = out.basisImages[k].data();
      for (size_t i = 0; i < data.size(); ++i) data[i] += w * src[i];
    }
    images.emplace_back(width, height, channels, std::move(data));
  }
  out.lightField = LightField4D(rows, cols, std::move(images));
  return out;
}

LightField4D makeParallaxLightField(size_t rows, size_t cols, size_t width, size_t height,
                                    size_t channels, uint64_t seed) {
  Rng rng(seed);
  const size_t margin = 16;
  const HdrImage bg = makeNaturalImage(width + 2 * margin, height + 2 * margin, channels, rng.next());
  const HdrImage fg = makeNaturalImage(width + 2 * margin, height + 2 * margin, channels, rng.next());
  const double cx = rng.uniform(0.35, 0.65) * static_cast<double>(width);
  const double cy = rng.uniform(0.35, 0.65) * static_cast<double>(height);
  const double radius = 0.25 * static_cast<double>(std::min(width, height));
  const double sc = static_cast<double>(rows - 1) / 2.0;
  const double tc = static_cast<double>(cols - 1) / 2.0;
  const long bgDisparity = 1;
  const long fgDisparity = 3;

  std::vector<HdrImage> views;
  for (size_t s = 0; s < rows; ++s) {
    for (size_t t = 0; t < cols; ++t) {
      const long ds = std::lround(static_cast<double>(s) - sc);
      const long dt = std::lround(static_cast<double>(t) - tc);
      std::vector<double> data(width * height * channels);
      for (size_t y = 0; y < height; ++y) {
        for (size_t x = 0; x < width; ++x) {
          const double fx = static_cast<double>(x) - static_cast<double>(dt * fgDisparity);
          const double fy = static_cast<double>(y) - static_cast<double>(ds * fgDisparity);
          const bool inFg = (fx - cx) * (fx - cx) + (fy - cy) * (fy - cy) < radius * radius;
          const long d = inFg ? fgDisparity : bgDisparity;
          const HdrImage& src = inFg ? fg : bg;
          const auto sx = static_cast<size_t>(std::clamp<long>(
              static_cast<long>(x + margin) - dt * d, 0, static_cast<long>(src.width()) - 1));
          const auto sy = static_cast<size_t>(std::clamp<long>(
              static_cast<long>(y + margin) - ds * d, 0, static_cast<long>(src.height()) - 1));
          for (size_t c = 0; c < channels; ++c) {
            data[(y * width + x) * channels + c] = src.at(sx, sy, c);
          }
        }
      }
      views.emplace_back(width, height, channels, std::move(data));
    }
  }
  return LightField4D(rows, cols, std::move(views));
}

LightField4D makeConstantLightField(size_t rows, size_t cols, size_t width, size_t height,
                                    size_t channels, double value) {
  std::vector<HdrImage> views(rows * cols,
                              HdrImage(width, height, channels,
                                       std::vector<double>(width * height * channels, value)));
  return LightField4D(rows, cols, std::move(views));
}

}  // namespace lfc
