#include "lfc/transform4d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lfc/error.hpp"

namespace lfc {

namespace {

constexpr std::string_view kModule = "transform4d";

double dctScale(size_t k, size_t n) {
  const double ck = k == 0 ? 1.0 / std::numbers::sqrt2 : 1.0;
  return std::sqrt(2.0 / static_cast<double>(n)) * ck;
}

double dctCos(size_t k, size_t i, size_t n) {
  return std::cos(static_cast<double>((2 * i + 1) * k) * std::numbers::pi /
                  static_cast<double>(2 * n));
}

constexpr std::array<size_t, 4> kStrides = {512, 64, 8, 1};

}  // namespace

QuantMatrix QuantMatrix::uniform(double step) {
  require(std::isfinite(step) && step > 0.0, kModule, "quantization step must be > 0");
  return QuantMatrix({step});
}

QuantMatrix QuantMatrix::perCoefficient(std::span<const double> divisors) {
  require(divisors.size() == kBlockSize, kModule, "quant matrix needs 4096 divisors");
  for (double q : divisors) {
    require(std::isfinite(q) && q > 0.0, kModule, "quantization divisors must be > 0");
  }
  return QuantMatrix(std::vector<double>(divisors.begin(), divisors.end()));
}

double QuantMatrix::maxDivisor() const {
  return *std::max_element(divisors_.begin(), divisors_.end());
}

size_t paddedExtent(size_t extent) {
  return std::max<size_t>(1, (extent + kTileEdge - 1) / kTileEdge) * kTileEdge;
}

Volume4D fold2dTo4d(std::span<const double> plane, size_t width, size_t height) {
  require(width > 0 && height > 0, kModule, "empty plane");
  require(plane.size() == width * height, kModule, "plane size mismatch");
  const size_t pw = paddedExtent(width);
  const size_t ph = paddedExtent(height);
  Volume4D vol;
  vol.dims = {ph / kBlockEdge, pw / kBlockEdge, kBlockEdge, kBlockEdge};
  vol.originalWidth = width;
  vol.originalHeight = height;
  vol.samples.resize(pw * ph);
  for (size_t y = 0; y < ph; ++y) {
    const size_t sy = std::min(y, height - 1);
    for (size_t x = 0; x < pw; ++x) {
      const size_t sx = std::min(x, width - 1);
      const size_t idx = ((y / 8 * vol.dims[1] + x / 8) * 8 + y % 8) * 8 + x % 8;
      vol.samples[idx] = plane[sy * width + sx];
    }
  }
  return vol;
}

std::vector<double> unfold4dTo2d(const Volume4D& volume) {
  const size_t w = volume.originalWidth;
  const size_t h = volume.originalHeight;
  require(volume.samples.size() == volume.paddedWidth() * volume.paddedHeight(), kModule,
          "volume sample count mismatch");
  require(w <= volume.paddedWidth() && h <= volume.paddedHeight(), kModule,
          "crop extent exceeds volume");
  std::vector<double> plane(w * h);
  for (size_t y = 0; y < h; ++y) {
    for (size_t x = 0; x < w; ++x) {
      const size_t idx = ((y / 8 * volume.dims[1] + x / 8) * 8 + y % 8) * 8 + x % 8;
      plane[y * w + x] = volume.samples[idx];
    }
  }
  return plane;
}

std::vector<Block4D> volumeToBlocks(const Volume4D& volume) {
  std::vector<Block4D> blocks(volume.blockCount());
  const size_t d1 = volume.dims[1];
  for (size_t tr = 0; tr < volume.tileRows(); ++tr) {
    for (size_t tc = 0; tc < volume.tileCols(); ++tc) {
      Block4D& b = blocks[tr * volume.tileCols() + tc];
      for (size_t k1 = 0; k1 < 8; ++k1) {
        for (size_t k2 = 0; k2 < 8; ++k2) {
          const size_t base = ((tr * 8 + k1) * d1 + tc * 8 + k2) * 64;
          std::copy_n(volume.samples.begin() + static_cast<std::ptrdiff_t>(base), 64,
                      b.values.begin() + static_cast<std::ptrdiff_t>(blockIndex(k1, k2, 0, 0)));
        }
      }
    }
  }
  return blocks;
}

Volume4D blocksToVolume(std::span<const Block4D> blocks, size_t originalWidth,
                        size_t originalHeight) {
  Volume4D vol;
  const size_t pw = paddedExtent(originalWidth);
  const size_t ph = paddedExtent(originalHeight);
  vol.dims = {ph / kBlockEdge, pw / kBlockEdge, kBlockEdge, kBlockEdge};
  vol.originalWidth = originalWidth;
  vol.originalHeight = originalHeight;
  require(blocks.size() == vol.blockCount(), kModule,
          "expected " + std::to_string(vol.blockCount()) + " blocks, got " +
              std::to_string(blocks.size()));
  vol.samples.resize(pw * ph);
  const size_t d1 = vol.dims[1];
  for (size_t tr = 0; tr < vol.tileRows(); ++tr) {
    for (size_t tc = 0; tc < vol.tileCols(); ++tc) {
      const Block4D& b = blocks[tr * vol.tileCols() + tc];
      for (size_t k1 = 0; k1 < 8; ++k1) {
        for (size_t k2 = 0; k2 < 8; ++k2) {
          const size_t base = ((tr * 8 + k1) * d1 + tc * 8 + k2) * 64;
          std::copy_n(b.values.begin() + static_cast<std::ptrdiff_t>(blockIndex(k1, k2, 0, 0)), 64,
                      vol.samples.begin() + static_cast<std::ptrdiff_t>(base));
        }
      }
    }
  }
  return vol;
}

std::vector<double> dct1d(std::span<const double> x) {
  const size_t n = x.size();
  require(n >= 1, kModule, "dct1d needs at least one sample");
  std::vector<double> out(n);
  for (size_t k = 0; k < n; ++k) {
    double sum = 0.0;
    for (size_t i = 0; i < n; ++i) sum += x[i] * dctCos(k, i, n);
    out[k] = dctScale(k, n) * sum;
  }
  return out;
}

std::vector<double> idct1d(std::span<const double> coeffs) {
  const size_t n = coeffs.size();
  require(n >= 1, kModule, "idct1d needs at least one coefficient");
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (size_t k = 0; k < n; ++k) sum += dctScale(k, n) * coeffs[k] * dctCos(k, i, n);
    out[i] = sum;
  }
  return out;
}

const std::array<std::array<double, kBlockEdge>, kBlockEdge>& dctBasis8() {
  static const auto basis = [] {
    std::array<std::array<double, kBlockEdge>, kBlockEdge> m{};
    for (size_t k = 0; k < kBlockEdge; ++k) {
      for (size_t i = 0; i < kBlockEdge; ++i) {
        m[k][i] = dctScale(k, kBlockEdge) * dctCos(k, i, kBlockEdge);
      }
    }
    return m;
  }();
  return basis;
}

void transformAxis(Block4D& block, size_t axis, bool inverse) {
  require(axis < 4, kModule, "axis must be 0..3");
  const auto& c = dctBasis8();
  const size_t stride = kStrides[axis];
  std::array<double, kBlockEdge> line{};
  for (size_t base = 0; base < kBlockSize; ++base) {
    // Visit each line once: from every index whose coordinate on `axis` is 0.
    if ((base / stride) % kBlockEdge != 0) continue;
    for (size_t i = 0; i < kBlockEdge; ++i) line[i] = block.values[base + i * stride];
    for (size_t k = 0; k < kBlockEdge; ++k) {
      double sum = 0.0;
      if (inverse) {
        for (size_t i = 0; i < kBlockEdge; ++i) sum += c[i][k] * line[i];
      } else {
        for (size_t i = 0; i < kBlockEdge; ++i) sum += c[k][i] * line[i];
      }
      block.values[base + k * stride] = sum;
    }
  }
}

Block4D dct4d(const Block4D& block) {
  Block4D out = block;
  for (size_t axis = 0; axis < 4; ++axis) transformAxis(out, axis, false);
  return out;
}

Block4D idct4d(const Block4D& block) {
  Block4D out = block;
  for (size_t axis = 4; axis-- > 0;) transformAxis(out, axis, true);
  return out;
}

QuantizedBlock quantize(const Block4D& block, const QuantMatrix& q) {
  QuantizedBlock out;
  for (size_t i = 0; i < kBlockSize; ++i) {
    const double level = std::round(block[i] / q.divisor(i));
    if (!(std::abs(level) <= kMaxQuantLevel)) {
      fail(ErrorKind::kInvalidArgument, kModule,
           "quantized level out of range; quantization step too small for the data");
    }
    out[i] = static_cast<int32_t>(level);
  }
  return out;
}

Block4D dequantize(const QuantizedBlock& block, const QuantMatrix& q) {
  Block4D out;
  for (size_t i = 0; i < kBlockSize; ++i) out[i] = block[i] * q.divisor(i);
  return out;
}

QuantMatrix distortionToQuant(int d, double baseStep) {
  if (d < kMinDistortion || d > kMaxDistortion) {
    fail(ErrorKind::kInvalidArgument, kModule,
         "distortion level must be in 1..5, got " + std::to_string(d));
  }
  return QuantMatrix::uniform(std::ldexp(baseStep, d - 1));
}

}  // namespace lfc
