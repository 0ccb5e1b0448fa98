#include "lfc/sweep.hpp"

#include "lfc/error.hpp"

namespace lfc {

SweepResult rdSweep(const LightField4D& lf, const SweepOptions& options) {
  require(!options.dLevels.empty(), "metrics", "sweep needs at least one distortion level");
  SweepResult out;
  out.peak = options.peak.value_or(lf.maxSample());
  require(out.peak > 0.0, "metrics", "PSNR peak must be > 0 (all-black ground truth?)");
  const double pixels = static_cast<double>(lf.viewCount() * lf.width() * lf.height());
  for (int d : options.dLevels) {
    EncodeOptions enc = options.encode;
    enc.dLevel = d;
    const EncodeResult encoded = encodeLightField(lf, enc);
    const DecodeResult decoded = decodeLightField(encoded.bytes);
    const LightFieldPsnr q = psnr(lf, decoded.lightField, out.peak);
    SweepRow row;
    row.d = d;
    row.qstep = encoded.quantStep;
    row.totalBytes = encoded.bytes.size();
    row.bpp = static_cast<double>(encoded.bytes.size()) * 8.0 / pixels;
    row.psnrMeanDb = q.mean;
    row.psnrMinDb = q.min;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace lfc
