#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lfc {

inline constexpr size_t kBlockEdge = 8;
inline constexpr size_t kBlockSize = 4096;  // 8^4
inline constexpr size_t kTileEdge = 64;     // one 4-D block per 64x64 image tile
inline constexpr int32_t kMaxQuantLevel = (1 << 30) - 1;

// Flattened coefficient index of k = (k1, k2, k3, k4).
constexpr size_t blockIndex(size_t k1, size_t k2, size_t k3, size_t k4) {
  return ((k1 * kBlockEdge + k2) * kBlockEdge + k3) * kBlockEdge + k4;
}

// 8x8x8x8 block of samples or DCT coefficients; DC is index (0,0,0,0).
struct Block4D {
  std::array<double, kBlockSize> values{};

  double& operator[](size_t i) { return values[i]; }
  double operator[](size_t i) const { return values[i]; }
  double& at(size_t k1, size_t k2, size_t k3, size_t k4) {
    return values[blockIndex(k1, k2, k3, k4)];
  }
  double at(size_t k1, size_t k2, size_t k3, size_t k4) const {
    return values[blockIndex(k1, k2, k3, k4)];
  }
};

struct QuantizedBlock {
  std::array<int32_t, kBlockSize> levels{};

  int32_t& operator[](size_t i) { return levels[i]; }
  int32_t operator[](size_t i) const { return levels[i]; }
  friend bool operator==(const QuantizedBlock&, const QuantizedBlock&) = default;
};

// Divisors Q(k): either one uniform step or 4096 per-coefficient steps.
class QuantMatrix {
 public:
  static QuantMatrix uniform(double step);
  static QuantMatrix perCoefficient(std::span<const double> divisors);

  bool isUniform() const noexcept { return divisors_.size() == 1; }
  double divisor(size_t i) const { return isUniform() ? divisors_[0] : divisors_[i]; }
  double maxDivisor() const;

 private:
  explicit QuantMatrix(std::vector<double> divisors) : divisors_(std::move(divisors)) {}
  std::vector<double> divisors_;
};

// A 2-D plane folded into 4 dimensions. Pixel (y, x) of the padded plane sits
// at (y/8, x/8, y%8, x%8), so dims = (H/8, W/8, 8, 8) and each 8^4 block holds
// one 64x64 tile with axes (tile-local block row, block col, row, col).
struct Volume4D {
  std::array<size_t, 4> dims{};
  std::vector<double> samples;
  size_t originalWidth = 0;
  size_t originalHeight = 0;

  size_t paddedHeight() const noexcept { return dims[0] * kBlockEdge; }
  size_t paddedWidth() const noexcept { return dims[1] * kBlockEdge; }
  size_t tileRows() const noexcept { return dims[0] / kBlockEdge; }
  size_t tileCols() const noexcept { return dims[1] / kBlockEdge; }
  size_t blockCount() const noexcept { return tileRows() * tileCols(); }
};

size_t paddedExtent(size_t extent);

// Pads by edge replication to multiples of 64, then folds.
Volume4D fold2dTo4d(std::span<const double> plane, size_t width, size_t height);
// Inverse of fold2dTo4d, cropped back to the original extent.
std::vector<double> unfold4dTo2d(const Volume4D& volume);

// Blocks in raster order of the 64x64 tiles.
std::vector<Block4D> volumeToBlocks(const Volume4D& volume);
Volume4D blocksToVolume(std::span<const Block4D> blocks, size_t originalWidth,
                        size_t originalHeight);

// Orthonormal DCT-II, X_k = sqrt(2/N) c_k sum_n x_n cos((2n+1) k pi / 2N),
// c_0 = 1/sqrt(2).
std::vector<double> dct1d(std::span<const double> x);
std::vector<double> idct1d(std::span<const double> coeffs);

// The 8-point basis, row k holding sqrt(2/8) c_k cos((2n+1) k pi / 16).
const std::array<std::array<double, kBlockEdge>, kBlockEdge>& dctBasis8();

// Applies the 8-point (inverse) DCT along one axis in place.
void transformAxis(Block4D& block, size_t axis, bool inverse);

Block4D dct4d(const Block4D& block);
Block4D idct4d(const Block4D& block);

// X_q(k) = round(X(k) / Q(k)), ties away from zero.
QuantizedBlock quantize(const Block4D& block, const QuantMatrix& q);
// X(k) = X_q(k) * Q(k).
Block4D dequantize(const QuantizedBlock& block, const QuantMatrix& q);

inline constexpr double kDefaultBaseStep = 1.0 / 1024.0;
inline constexpr int kMinDistortion = 1;
inline constexpr int kMaxDistortion = 5;

// Uniform step 2^(d-1) * baseStep for distortion level d in 1..5.
QuantMatrix distortionToQuant(int d, double baseStep = kDefaultBaseStep);

}  // namespace lfc
