#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "lfc/image.hpp"

namespace lfc {

// ---------------------------------------------------------------------------
// IPT opponent colour space (Ebner & Fairchild). Linear RGB is taken to XYZ
// through the chosen primaries (D65 white), to Hunt-Pointer-Estevez cone
// responses normalised so D65 white is (1,1,1), compressed with a
// sign-preserving 0.43 power, and mixed into I, P, T.

enum class Primaries : uint8_t { kRec709 = 0, kRec2020 = 1 };

Primaries parsePrimaries(std::string_view name);
std::string_view primariesName(Primaries p);

struct IptPixel {
  double i = 0.0;
  double p = 0.0;
  double t = 0.0;
};

inline constexpr double kIptExponent = 0.43;

class IptConverter {
 public:
  explicit IptConverter(Primaries primaries = Primaries::kRec709);

  IptPixel toIpt(const std::array<double, 3>& rgb) const;
  std::array<double, 3> toRgb(const IptPixel& ipt) const;

  const Eigen::Matrix3d& rgbToLms() const noexcept { return rgbToLms_; }

 private:
  Eigen::Matrix3d rgbToLms_;
  Eigen::Matrix3d lmsToRgb_;
  Eigen::Matrix3d lmsToIpt_;
  Eigen::Matrix3d iptToLms_;
};

IptPixel rgbToIpt(const std::array<double, 3>& rgb, Primaries primaries = Primaries::kRec709);
std::array<double, 3> iptToRgb(const IptPixel& ipt, Primaries primaries = Primaries::kRec709);

// Linear RGB -> XYZ for the given primaries under D65.
Eigen::Matrix3d rgbToXyzMatrix(Primaries primaries);

// ---------------------------------------------------------------------------
// Piecewise perceptual transfer function
//   L = a I                 for I < Is
//   L = b I^(1/c) + d       for Is <= I < Ip
//   L = e log10(I) + f      for Ip <= I <= Ih
// b, d, e, f follow from value and slope continuity at Is and Ip.

class PtfParams {
 public:
  static PtfParams fromAnchors(double a, double c, double lowBreak, double midBreak,
                               double highBreak);
  static PtfParams defaults();

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double c() const noexcept { return c_; }
  double d() const noexcept { return d_; }
  double e() const noexcept { return e_; }
  double f() const noexcept { return f_; }
  double lowBreak() const noexcept { return lowBreak_; }
  double midBreak() const noexcept { return midBreak_; }
  double highBreak() const noexcept { return highBreak_; }
  double lowCode() const noexcept { return lowCode_; }
  double midCode() const noexcept { return midCode_; }
  double maxCode() const noexcept { return maxCode_; }

  friend bool operator==(const PtfParams&, const PtfParams&) = default;

 private:
  PtfParams() = default;
  double a_ = 0, b_ = 0, c_ = 0, d_ = 0, e_ = 0, f_ = 0;
  double lowBreak_ = 0, midBreak_ = 0, highBreak_ = 0;
  double lowCode_ = 0, midCode_ = 0, maxCode_ = 0;
};

// Non-positive input is clamped to the smallest positive double, input above
// the high break to the high break.
double ptfForward(double intensity, const PtfParams& p);
// Codes outside [0, maxCode] are clamped; each clamp bumps *clampCount.
double ptfInverse(double code, const PtfParams& p, size_t* clampCount = nullptr);

// ---------------------------------------------------------------------------
// Chroma discretisation P_out = floor(P_in^lambda * (2^n - 1)) with lambda
// chosen to minimise the mean absolute round-trip error.

inline constexpr double kLambdaMin = 0.10;
inline constexpr double kLambdaMax = 3.00;
inline constexpr size_t kLambdaGridSize = 291;  // step 0.01
inline constexpr size_t kLambdaMaxSamples = size_t{1} << 18;
inline constexpr double kChromaFloor = 0x1.0p-20;

double lambdaGridValue(size_t i);

// mean |(floor(P^lambda K) / K)^(1/lambda) - P|, K = 2^n - 1.
double lambdaObjective(std::span<const double> samples, double lambda, int bitDepth);

struct LambdaChoice {
  double lambda = 1.0;
  double objective = 0.0;
};

// Grid search over [0.10, 3.00] in 0.01 steps; ties go to the smallest lambda.
// Planes above 2^18 samples are strided down unless fullPlane is set.
LambdaChoice optimizeLambda(std::span<const double> samples, int bitDepth,
                            bool fullPlane = false);

// Worst-case |decoded - P| in the normalised domain for a given lambda.
double chromaRoundTripBound(double lambda, int bitDepth);

struct ChromaChannelMeta {
  double lambda = 1.0;
  double min = 0.0;
  double max = 1.0;
  double objective = 0.0;  // objective at encode time (normalised domain)

  friend bool operator==(const ChromaChannelMeta&, const ChromaChannelMeta&) = default;
};

// [min, max] -> [2^-20, 1].
double normalizeChroma(double value, const ChromaChannelMeta& meta);
double denormalizeChroma(double normalized, const ChromaChannelMeta& meta);

// Fits min/max, picks lambda, and records the objective.
ChromaChannelMeta fitChroma(std::span<const double> plane, int bitDepth, bool fullPlane = false);

std::vector<uint32_t> chromaEncode(std::span<const double> plane, const ChromaChannelMeta& meta,
                                   int bitDepth);
std::vector<double> chromaDecode(std::span<const uint32_t> codes, const ChromaChannelMeta& meta,
                                 int bitDepth, size_t* clampCount = nullptr);

// ---------------------------------------------------------------------------
// Per-frame metadata ("LUT") and the whole-frame perceptual transform.

struct IntensityMapping {
  double offset = 0.0;  // plane minimum
  double scale = 1.0;   // maps [min, max] onto [0, highBreak]

  friend bool operator==(const IntensityMapping&, const IntensityMapping&) = default;
};

IntensityMapping fitIntensityMapping(std::span<const double> plane, const PtfParams& ptf);
std::vector<double> intensityScale(std::span<const double> plane, const IntensityMapping& map,
                                   const PtfParams& ptf);
std::vector<double> intensityUnscale(std::span<const double> scaled, const IntensityMapping& map);

struct FrameMetadata {
  PtfParams ptf = PtfParams::defaults();
  IntensityMapping intensity;
  std::array<ChromaChannelMeta, 2> chroma;  // P, T
  int bitDepth = 10;
  Primaries primaries = Primaries::kRec709;
  uint8_t planes = 3;  // 1 for grayscale frames (intensity only)

  friend bool operator==(const FrameMetadata&, const FrameMetadata&) = default;
};

struct PerceptualOptions {
  PtfParams ptf = PtfParams::defaults();
  int bitDepth = 10;
  Primaries primaries = Primaries::kRec709;
  bool fullPlaneLambda = false;
};

struct PerceptualFrame {
  size_t width = 0;
  size_t height = 0;
  std::vector<double> intensityCode;  // PTF output in [0, maxCode]
  std::array<std::vector<uint32_t>, 2> chromaCode;
  FrameMetadata meta;
};

void validateBitDepth(int bitDepth);

PerceptualFrame perceptualEncode(const HdrImage& image, const PerceptualOptions& options);
HdrImage perceptualDecode(const PerceptualFrame& frame, size_t* clampCount = nullptr);

// Human-readable key=value sidecar for one frame.
std::string formatMetadata(const FrameMetadata& meta, size_t frameIndex);

}  // namespace lfc
