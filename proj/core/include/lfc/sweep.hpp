#pragma once

#include <optional>
#include <vector>

#include "lfc/image.hpp"
#include "lfc/metrics.hpp"
#include "lfc/pipeline.hpp"

namespace lfc {

struct SweepOptions {
  EncodeOptions encode;
  std::vector<int> dLevels = {1, 2, 3, 4, 5};
  // PSNR peak; defaults to the ground-truth maximum.
  std::optional<double> peak;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double peak = 0.0;
};

// Full encode/decode/reconstruct per distortion level, scored against lf.
// bpp counts container bits per light-field pixel (M * U * V).
SweepResult rdSweep(const LightField4D& lf, const SweepOptions& options);

}  // namespace lfc
