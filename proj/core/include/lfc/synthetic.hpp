#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "lfc/image.hpp"

namespace lfc {

// Smooth HDR scene: log-luminance spanning roughly three decades, slowly
// varying hue, and mild fine texture. All samples are strictly positive.
HdrImage makeNaturalImage(size_t width, size_t height, size_t channels, uint64_t seed);

struct MixtureLightField {
  LightField4D lightField;
  std::vector<HdrImage> basisImages;
  Eigen::MatrixXd weights;  // M x K, view m = sum_k weights(m, k) * basis k
};

// Every view is a fixed non-negative mixture of `rank` basis images.
MixtureLightField makeMixtureLightField(size_t rows, size_t cols, size_t width, size_t height,
                                        size_t channels, size_t rank, uint64_t seed);

// Two-layer Lambertian scene: a background plane and a nearer textured disc
// with larger disparity, sampled on an S x T grid of horizontal/vertical shifts.
LightField4D makeParallaxLightField(size_t rows, size_t cols, size_t width, size_t height,
                                    size_t channels, uint64_t seed);

// Constant colour in every view.
LightField4D makeConstantLightField(size_t rows, size_t cols, size_t width, size_t height,
                                    size_t channels, double value);

}  // namespace lfc
