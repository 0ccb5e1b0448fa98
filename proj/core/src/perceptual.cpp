#include "lfc/perceptual.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

#include "lfc/error.hpp"

namespace lfc {

namespace {

constexpr std::string_view kModule = "perceptual";

struct Chromaticity {
  double x;
  double y;
};

constexpr Chromaticity kD65 = {0.3127, 0.3290};

double signedPow(double v, double exponent) {
  return v < 0.0 ? -std::pow(-v, exponent) : std::pow(v, exponent);
}

Eigen::Matrix3d xyzToLmsHpe() {
  Eigen::Matrix3d m;
  m << 0.4002, 0.7075, -0.0807,
      -0.2280, 1.1500, 0.0612,
       0.0000, 0.0000, 0.9184;
  return m;
}

Eigen::Matrix3d lmsToIptMatrix() {
  Eigen::Matrix3d m;
  m << 0.4000, 0.4000, 0.2000,
       4.4550, -4.8510, 0.3960,
       0.8056, 0.3572, -1.1628;
  return m;
}

uint32_t codeMax(int bitDepth) { return (uint32_t{1} << bitDepth) - 1; }

}  // namespace

Primaries parsePrimaries(std::string_view name) {
  if (name == "rec709" || name == "srgb") return Primaries::kRec709;
  if (name == "rec2020") return Primaries::kRec2020;
  fail(ErrorKind::kInvalidArgument, kModule, "unknown primaries '" + std::string(name) + "'");
}

std::string_view primariesName(Primaries p) {
  return p == Primaries::kRec2020 ? "rec2020" : "rec709";
}

Eigen::Matrix3d rgbToXyzMatrix(Primaries primaries) {
  std::array<Chromaticity, 3> prim;
  if (primaries == Primaries::kRec2020) {
    prim = {{{0.708, 0.292}, {0.170, 0.797}, {0.131, 0.046}}};
  } else {
    prim = {{{0.640, 0.330}, {0.300, 0.600}, {0.150, 0.060}}};
  }
  Eigen::Matrix3d p;
  for (int c = 0; c < 3; ++c) {
    const auto [x, y] = prim[static_cast<size_t>(c)];
    p(0, c) = x / y;
    p(1, c) = 1.0;
    p(2, c) = (1.0 - x - y) / y;
  }
  const Eigen::Vector3d white(kD65.x / kD65.y, 1.0, (1.0 - kD65.x - kD65.y) / kD65.y);
  const Eigen::Vector3d s = p.partialPivLu().solve(white);
  return p * s.asDiagonal();
}

IptConverter::IptConverter(Primaries primaries) {
  Eigen::Matrix3d lms = xyzToLmsHpe() * rgbToXyzMatrix(primaries);
  // Normalise so that RGB white lands exactly on unit cone responses.
  const Eigen::Vector3d white = lms * Eigen::Vector3d::Ones();
  for (int r = 0; r < 3; ++r) lms.row(r) /= white(r);
  rgbToLms_ = lms;
  lmsToRgb_ = lms.inverse();
  lmsToIpt_ = lmsToIptMatrix();
  iptToLms_ = lmsToIpt_.inverse();
}

IptPixel IptConverter::toIpt(const std::array<double, 3>& rgb) const {
  const Eigen::Vector3d lms = rgbToLms_ * Eigen::Vector3d(rgb[0], rgb[1], rgb[2]);
  const Eigen::Vector3d compressed(signedPow(lms(0), kIptExponent),
                                   signedPow(lms(1), kIptExponent),
                                   signedPow(lms(2), kIptExponent));
  const Eigen::Vector3d ipt = lmsToIpt_ * compressed;
  return {ipt(0), ipt(1), ipt(2)};
}

std::array<double, 3> IptConverter::toRgb(const IptPixel& ipt) const {
  const Eigen::Vector3d compressed = iptToLms_ * Eigen::Vector3d(ipt.i, ipt.p, ipt.t);
  const Eigen::Vector3d lms(signedPow(compressed(0), 1.0 / kIptExponent),
                            signedPow(compressed(1), 1.0 / kIptExponent),
                            signedPow(compressed(2), 1.0 / kIptExponent));
  const Eigen::Vector3d rgb = lmsToRgb_ * lms;
  return {rgb(0), rgb(1), rgb(2)};
}

IptPixel rgbToIpt(const std::array<double, 3>& rgb, Primaries primaries) {
  return IptConverter(primaries).toIpt(rgb);
}

std::array<double, 3> iptToRgb(const IptPixel& ipt, Primaries primaries) {
  return IptConverter(primaries).toRgb(ipt);
}

PtfParams PtfParams::fromAnchors(double a, double c, double lowBreak, double midBreak,
                                 double highBreak) {
  require(std::isfinite(a) && a > 0.0, kModule, "PTF gain a must be > 0");
  require(std::isfinite(c) && c > 0.0, kModule, "PTF exponent c must be > 0");
  require(lowBreak > 0.0 && lowBreak < midBreak && midBreak < highBreak &&
              std::isfinite(highBreak),
          kModule, "PTF breakpoints must satisfy 0 < Is < Ip < Ih");
  PtfParams p;
  p.a_ = a;
  p.c_ = c;
  p.lowBreak_ = lowBreak;
  p.midBreak_ = midBreak;
  p.highBreak_ = highBreak;
  const double g = 1.0 / c;
  // Slope match at Is: a = (b/c) Is^(1/c - 1).
  p.b_ = a * c * std::pow(lowBreak, 1.0 - g);
  // Value match at Is.
  p.d_ = a * lowBreak - p.b_ * std::pow(lowBreak, g);
  // Slope match at Ip: (b/c) Ip^(1/c - 1) = e / (Ip ln 10).
  p.e_ = p.b_ / c * std::pow(midBreak, g) * std::numbers::ln10;
  // Value match at Ip.
  p.f_ = p.b_ * std::pow(midBreak, g) + p.d_ - p.e_ * std::log10(midBreak);
  p.lowCode_ = a * lowBreak;
  p.midCode_ = p.e_ * std::log10(midBreak) + p.f_;
  p.maxCode_ = p.e_ * std::log10(highBreak) + p.f_;

  const double lowMid = p.b_ * std::pow(lowBreak, g) + p.d_;
  const double midHigh = p.b_ * std::pow(midBreak, g) + p.d_;
  if (std::abs(lowMid - p.lowCode_) > 1e-9 * std::max(1.0, p.lowCode_) ||
      std::abs(midHigh - p.midCode_) > 1e-9 * std::max(1.0, p.midCode_)) {
    fail(ErrorKind::kInvalidArgument, kModule, "PTF branches are discontinuous");
  }
  // Dense log-spaced monotonicity check over (0, Ih].
  constexpr int kSamples = 4096;
  const double lo = std::log10(lowBreak) - 6.0;
  const double hi = std::log10(highBreak);
  double prev = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kSamples; ++i) {
    const double x = std::pow(10.0, lo + (hi - lo) * i / kSamples);
    const double v = ptfForward(x, p);
    if (!(v > prev)) fail(ErrorKind::kInvalidArgument, kModule, "PTF is not strictly increasing");
    prev = v;
  }
  return p;
}

PtfParams PtfParams::defaults() {
  static const PtfParams p = fromAnchors(4.5, 2.4, 0.018, 1.0, 1.0e4);
  return p;
}

double ptfForward(double intensity, const PtfParams& p) {
  double x = intensity;
  if (!(x > 0.0)) x = std::numeric_limits<double>::min();
  if (x > p.highBreak()) x = p.highBreak();
  if (x < p.lowBreak()) return p.a() * x;
  if (x < p.midBreak()) return p.b() * std::pow(x, 1.0 / p.c()) + p.d();
  return p.e() * std::log10(x) + p.f();
}

double ptfInverse(double code, const PtfParams& p, size_t* clampCount) {
  double v = code;
  if (!(v >= 0.0) || v > p.maxCode()) {
    v = v > p.maxCode() ? p.maxCode() : 0.0;
    if (clampCount) ++*clampCount;
  }
  if (v < p.lowCode()) return v / p.a();
  if (v < p.midCode()) return std::pow((v - p.d()) / p.b(), p.c());
  return std::pow(10.0, (v - p.f()) / p.e());
}

double lambdaGridValue(size_t i) { return static_cast<double>(10 + i) / 100.0; }

void validateBitDepth(int bitDepth) {
  require(bitDepth == 8 || bitDepth == 10 || bitDepth == 12, kModule,
          "bit depth must be 8, 10 or 12");
}

double lambdaObjective(std::span<const double> samples, double lambda, int bitDepth) {
  const double k = static_cast<double>(codeMax(bitDepth));
  const double inv = 1.0 / lambda;
  double sum = 0.0;
  for (double v : samples) {
    const double code = std::floor(std::pow(v, lambda) * k);
    sum += std::abs(std::pow(code / k, inv) - v);
  }
  return sum / static_cast<double>(samples.size());
}

LambdaChoice optimizeLambda(std::span<const double> samples, int bitDepth, bool fullPlane) {
  validateBitDepth(bitDepth);
  require(!samples.empty(), kModule, "empty chroma plane");
  for (double v : samples) {
    require(v > 0.0 && v <= 1.0, kModule, "chroma samples must lie in (0, 1]");
  }
  std::vector<double> subset;
  std::span<const double> used = samples;
  if (!fullPlane && samples.size() > kLambdaMaxSamples) {
    const size_t stride = (samples.size() + kLambdaMaxSamples - 1) / kLambdaMaxSamples;
    for (size_t i = 0; i < samples.size(); i += stride) subset.push_back(samples[i]);
    used = subset;
  }
  LambdaChoice best{lambdaGridValue(0), lambdaObjective(used, lambdaGridValue(0), bitDepth)};
  for (size_t i = 1; i < kLambdaGridSize; ++i) {
    const double lambda = lambdaGridValue(i);
    const double obj = lambdaObjective(used, lambda, bitDepth);
    if (obj < best.objective) best = {lambda, obj};
  }
  return best;
}

double chromaRoundTripBound(double lambda, int bitDepth) {
  const double k = static_cast<double>(codeMax(bitDepth));
  // The decoded value lies below the input by less than one code step mapped
  // through the inverse power: concave for lambda >= 1, convex otherwise.
  return lambda >= 1.0 ? std::pow(1.0 / k, 1.0 / lambda) : 1.0 / (lambda * k);
}

double normalizeChroma(double value, const ChromaChannelMeta& meta) {
  const double v = std::clamp(value, meta.min, meta.max);
  return kChromaFloor + (1.0 - kChromaFloor) * (v - meta.min) / (meta.max - meta.min);
}

double denormalizeChroma(double normalized, const ChromaChannelMeta& meta) {
  const double v = meta.min + (normalized - kChromaFloor) / (1.0 - kChromaFloor) *
                                  (meta.max - meta.min);
  return std::clamp(v, meta.min, meta.max);
}

ChromaChannelMeta fitChroma(std::span<const double> plane, int bitDepth, bool fullPlane) {
  require(!plane.empty(), kModule, "empty chroma plane");
  const auto [lo, hi] = std::minmax_element(plane.begin(), plane.end());
  ChromaChannelMeta meta;
  meta.min = *lo;
  meta.max = *hi > *lo ? *hi : *lo + 1.0;
  std::vector<double> normalized(plane.size());
  for (size_t i = 0; i < plane.size(); ++i) normalized[i] = normalizeChroma(plane[i], meta);
  const LambdaChoice choice = optimizeLambda(normalized, bitDepth, fullPlane);
  meta.lambda = choice.lambda;
  meta.objective = choice.objective;
  return meta;
}

std::vector<uint32_t> chromaEncode(std::span<const double> plane, const ChromaChannelMeta& meta,
                                   int bitDepth) {
  validateBitDepth(bitDepth);
  require(meta.max > meta.min, kModule, "chroma range must be non-empty");
  const double k = static_cast<double>(codeMax(bitDepth));
  std::vector<uint32_t> codes(plane.size());
  for (size_t i = 0; i < plane.size(); ++i) {
    const double v = normalizeChroma(plane[i], meta);
    codes[i] = static_cast<uint32_t>(std::floor(std::pow(v, meta.lambda) * k));
  }
  return codes;
}

std::vector<double> chromaDecode(std::span<const uint32_t> codes, const ChromaChannelMeta& meta,
                                 int bitDepth, size_t* clampCount) {
  validateBitDepth(bitDepth);
  const uint32_t kmax = codeMax(bitDepth);
  const double k = static_cast<double>(kmax);
  std::vector<double> out(codes.size());
  for (size_t i = 0; i < codes.size(); ++i) {
    uint32_t c = codes[i];
    if (c > kmax) {
      c = kmax;
      if (clampCount) ++*clampCount;
    }
    out[i] = denormalizeChroma(std::pow(c / k, 1.0 / meta.lambda), meta);
  }
  return out;
}

IntensityMapping fitIntensityMapping(std::span<const double> plane, const PtfParams& ptf) {
  require(!plane.empty(), kModule, "empty intensity plane");
  const auto [lo, hi] = std::minmax_element(plane.begin(), plane.end());
  require(std::isfinite(*lo) && std::isfinite(*hi), kModule, "non-finite intensity");
  IntensityMapping map;
  map.offset = *lo;
  map.scale = *hi > *lo ? ptf.highBreak() / (*hi - *lo) : 1.0;
  return map;
}

std::vector<double> intensityScale(std::span<const double> plane, const IntensityMapping& map,
                                   const PtfParams& ptf) {
  std::vector<double> out(plane.size());
  for (size_t i = 0; i < plane.size(); ++i) {
    out[i] = std::clamp((plane[i] - map.offset) * map.scale, 0.0, ptf.highBreak());
  }
  return out;
}

std::vector<double> intensityUnscale(std::span<const double> scaled, const IntensityMapping& map) {
  std::vector<double> out(scaled.size());
  for (size_t i = 0; i < scaled.size(); ++i) out[i] = scaled[i] / map.scale + map.offset;
  return out;
}

PerceptualFrame perceptualEncode(const HdrImage& image, const PerceptualOptions& options) {
  validateBitDepth(options.bitDepth);
  require(!image.empty(), kModule, "empty image");
  PerceptualFrame frame;
  frame.width = image.width();
  frame.height = image.height();
  frame.meta.ptf = options.ptf;
  frame.meta.bitDepth = options.bitDepth;
  frame.meta.primaries = options.primaries;
  frame.meta.planes = static_cast<uint8_t>(image.channels());

  const size_t n = image.pixelCount();
  std::vector<double> intensity(n);
  std::array<std::vector<double>, 2> chroma;
  if (image.channels() == 3) {
    const IptConverter conv(options.primaries);
    chroma[0].resize(n);
    chroma[1].resize(n);
    for (size_t i = 0; i < n; ++i) {
      const auto d = image.data().subspan(i * 3, 3);
      const IptPixel px = conv.toIpt({d[0], d[1], d[2]});
      intensity[i] = px.i;
      chroma[0][i] = px.p;
      chroma[1][i] = px.t;
    }
  } else {
    // Achromatic pixels have P = T = 0 and I = Y^0.43.
    for (size_t i = 0; i < n; ++i) intensity[i] = std::pow(image.data()[i], kIptExponent);
  }

  frame.meta.intensity = fitIntensityMapping(intensity, options.ptf);
  const auto scaled = intensityScale(intensity, frame.meta.intensity, options.ptf);
  frame.intensityCode.resize(n);
  for (size_t i = 0; i < n; ++i) frame.intensityCode[i] = ptfForward(scaled[i], options.ptf);

  if (image.channels() == 3) {
    for (size_t c = 0; c < 2; ++c) {
      frame.meta.chroma[c] = fitChroma(chroma[c], options.bitDepth, options.fullPlaneLambda);
      frame.chromaCode[c] = chromaEncode(chroma[c], frame.meta.chroma[c], options.bitDepth);
    }
  }
  return frame;
}

HdrImage perceptualDecode(const PerceptualFrame& frame, size_t* clampCount) {
  const FrameMetadata& meta = frame.meta;
  const size_t n = frame.width * frame.height;
  require(frame.intensityCode.size() == n, kModule, "intensity plane size mismatch");
  std::vector<double> scaled(n);
  for (size_t i = 0; i < n; ++i) scaled[i] = ptfInverse(frame.intensityCode[i], meta.ptf, clampCount);
  const std::vector<double> intensity = intensityUnscale(scaled, meta.intensity);

  if (meta.planes == 1) {
    std::vector<double> data(n);
    for (size_t i = 0; i < n; ++i) {
      data[i] = intensity[i] > 0.0 ? std::pow(intensity[i], 1.0 / kIptExponent) : 0.0;
    }
    return HdrImage(frame.width, frame.height, 1, std::move(data));
  }

  require(frame.chromaCode[0].size() == n && frame.chromaCode[1].size() == n, kModule,
          "chroma plane size mismatch");
  const auto p = chromaDecode(frame.chromaCode[0], meta.chroma[0], meta.bitDepth, clampCount);
  const auto t = chromaDecode(frame.chromaCode[1], meta.chroma[1], meta.bitDepth, clampCount);
  const IptConverter conv(meta.primaries);
  std::vector<double> data(n * 3);
  for (size_t i = 0; i < n; ++i) {
    const auto rgb = conv.toRgb({intensity[i], p[i], t[i]});
    for (size_t c = 0; c < 3; ++c) {
      const double v = rgb[c];
      data[i * 3 + c] = std::isfinite(v) && v > 0.0 ? v : 0.0;
    }
  }
  return HdrImage(frame.width, frame.height, 3, std::move(data));
}

std::string formatMetadata(const FrameMetadata& meta, size_t frameIndex) {
  std::string out;
  char buf[128];
  auto put = [&](const char* key, double v) {
    std::snprintf(buf, sizeof(buf), "frame%zu.%s=%.17g\n", frameIndex, key, v);
    out += buf;
  };
  put("bit_depth", meta.bitDepth);
  put("planes", meta.planes);
  out += "frame" + std::to_string(frameIndex) + ".primaries=" +
         std::string(primariesName(meta.primaries)) + "\n";
  put("ptf.a", meta.ptf.a());
  put("ptf.b", meta.ptf.b());
  put("ptf.c", meta.ptf.c());
  put("ptf.d", meta.ptf.d());
  put("ptf.e", meta.ptf.e());
  put("ptf.f", meta.ptf.f());
  put("ptf.low_break", meta.ptf.lowBreak());
  put("ptf.mid_break", meta.ptf.midBreak());
  put("ptf.high_break", meta.ptf.highBreak());
  put("intensity.offset", meta.intensity.offset);
  put("intensity.scale", meta.intensity.scale);
  if (meta.planes == 3) {
    const char* names[2] = {"protan", "tritan"};
    for (size_t c = 0; c < 2; ++c) {
      const std::string prefix = names[c];
      put((prefix + ".lambda").c_str(), meta.chroma[c].lambda);
      put((prefix + ".min").c_str(), meta.chroma[c].min);
      put((prefix + ".max").c_str(), meta.chroma[c].max);
      put((prefix + ".objective").c_str(), meta.chroma[c].objective);
    }
  }
  return out;
}

}  // namespace lfc
