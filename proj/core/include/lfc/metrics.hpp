#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lfc/image.hpp"

namespace lfc {

double meanSquaredError(std::span<const double> a, std::span<const double> b);

// 10 log10(peak^2 / mse); +infinity for identical signals.
double psnrFromMse(double mse, double peak);
double psnr(const HdrImage& a, const HdrImage& b, double peak);

struct LightFieldPsnr {
  std::vector<double> perView;
  double mean = 0.0;  // from the mean of per-view MSEs
  double min = 0.0;
};

LightFieldPsnr psnr(const LightField4D& a, const LightField4D& b, double peak);

struct RDPoint {
  double rate = 0.0;  // bits per pixel or bytes; must be > 0
  double psnr = 0.0;  // dB
};

struct BDResult {
  double bdRate = 0.0;  // percent
  double bdPsnr = 0.0;  // dB
};

// Bjontegaard deltas from cubic least-squares fits of PSNR over log10(rate)
// and log10(rate) over PSNR, integrated over the overlap of both curves.
BDResult bdMetrics(std::span<const RDPoint> reference, std::span<const RDPoint> test);

// Coefficients c0..c3 of the least-squares cubic through (x, y).
std::vector<double> fitCubic(std::span<const double> x, std::span<const double> y);

// One row of a rate-distortion sweep.
struct SweepRow {
  int d = 1;
  double qstep = 0.0;
  uint64_t totalBytes = 0;
  double bpp = 0.0;
  double psnrMeanDb = 0.0;
  double psnrMinDb = 0.0;
};

inline constexpr const char* kSweepCsvHeader = "d,qstep,total_bytes,bpp,psnr_mean_db,psnr_min_db";

void writeSweepCsv(std::ostream& out, std::span<const SweepRow> rows);
std::vector<SweepRow> readSweepCsv(std::istream& in);

std::vector<RDPoint> toRdPoints(std::span<const SweepRow> rows);

}  // namespace lfc
