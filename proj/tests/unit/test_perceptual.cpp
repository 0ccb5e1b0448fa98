#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "lfc/metrics.hpp"
#include "lfc/perceptual.hpp"
#include "lfc/rng.hpp"
#include "lfc/synthetic.hpp"
#include "util.hpp"

using namespace lfc;
using testutil::throwsError;

namespace {

// Independent chain from published constants: BT.709 chromaticities, D65,
// HPE, and the IPT matrix.
IptPixel referenceIpt(const std::array<double, 3>& rgb) {
  // BT.709 primaries and D65 white from their xy chromaticities.
  const double xy[4][2] = {{0.64, 0.33}, {0.30, 0.60}, {0.15, 0.06}, {0.3127, 0.3290}};
  Eigen::Matrix3d prim;
  for (int c = 0; c < 3; ++c) {
    prim.col(c) << xy[c][0] / xy[c][1], 1.0, (1 - xy[c][0] - xy[c][1]) / xy[c][1];
  }
  const Eigen::Vector3d w(xy[3][0] / xy[3][1], 1.0, (1 - xy[3][0] - xy[3][1]) / xy[3][1]);
  const Eigen::Matrix3d srgb = prim * (prim.inverse() * w).asDiagonal();
  Eigen::Matrix3d hpe;
  hpe << 0.4002, 0.7075, -0.0807,
        -0.2280, 1.1500, 0.0612,
         0.0,    0.0,    0.9184;
  const Eigen::Vector3d white = hpe * srgb * Eigen::Vector3d::Ones();
  const Eigen::Vector3d lms =
      (hpe * srgb * Eigen::Vector3d(rgb[0], rgb[1], rgb[2])).cwiseQuotient(white);
  Eigen::Vector3d lp;
  for (int i = 0; i < 3; ++i) {
    lp(i) = lms(i) < 0 ? -std::pow(-lms(i), 0.43) : std::pow(lms(i), 0.43);
  }
  Eigen::Matrix3d ipt;
  ipt << 0.4, 0.4, 0.2, 4.455, -4.851, 0.396, 0.8056, 0.3572, -1.1628;
  const Eigen::Vector3d out = ipt * lp;
  return {out(0), out(1), out(2)};
}

}  // namespace

TEST(Ipt, MatchesPublishedMatrixChain) {
  for (const auto& rgb : std::vector<std::array<double, 3>>{
           {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0.2, 0.5, 0.9}, {3.0, 1.0, 0.25}}) {
    const IptPixel got = rgbToIpt(rgb);
    const IptPixel want = referenceIpt(rgb);
    EXPECT_NEAR(got.i, want.i, 2e-6);
    EXPECT_NEAR(got.p, want.p, 2e-6);
    EXPECT_NEAR(got.t, want.t, 2e-6);
  }
}

TEST(Ipt, WhiteAndGreysAreAchromatic) {
  const IptPixel white = rgbToIpt({1, 1, 1});
  EXPECT_NEAR(white.i, 1.0, 1e-12);
  EXPECT_NEAR(white.p, 0.0, 1e-12);
  EXPECT_NEAR(white.t, 0.0, 1e-12);
  const IptPixel grey = rgbToIpt({0.18, 0.18, 0.18});
  EXPECT_NEAR(grey.i, std::pow(0.18, 0.43), 1e-12);
  EXPECT_NEAR(grey.p, 0.0, 1e-12);
  EXPECT_NEAR(grey.t, 0.0, 1e-12);
  const IptPixel wide = rgbToIpt({0.5, 0.5, 0.5}, Primaries::kRec2020);
  EXPECT_NEAR(wide.p, 0.0, 1e-12);
}

TEST(Ipt, InverseRoundTrip) {
  Rng rng(1);
  for (Primaries prim : {Primaries::kRec709, Primaries::kRec2020}) {
    for (int i = 0; i < 200; ++i) {
      const std::array<double, 3> rgb = {rng.uniform(0, 50), rng.uniform(0, 50),
                                         rng.uniform(0, 50)};
      const auto back = iptToRgb(rgbToIpt(rgb, prim), prim);
      for (int c = 0; c < 3; ++c) EXPECT_NEAR(back[c], rgb[c], 1e-10 * (1 + rgb[c]));
    }
  }
}

TEST(Ipt, Rec709PrimariesMatchPublishedMatrix) {
  const Eigen::Matrix3d m = rgbToXyzMatrix(Primaries::kRec709);
  EXPECT_NEAR(m(0, 0), 0.4124564, 1e-4);
  EXPECT_NEAR(m(1, 1), 0.7151522, 1e-4);
  // Published tables round the white point differently; they agree to ~3e-4.
  EXPECT_NEAR(m(2, 2), 0.9503041, 3e-4);
  EXPECT_NEAR(m.row(1).sum(), 1.0, 1e-12);  // Y of white
}

TEST(Ptf, DefaultParametersFromClosedForm) {
  const PtfParams p = PtfParams::defaults();
  const double a = 4.5, c = 2.4, s = 0.018;
  const double b = a * c * std::pow(s, 1.0 - 1.0 / c);
  const double d = a * s - b * std::pow(s, 1.0 / c);
  const double e = b / c * std::numbers::ln10;
  const double f = b + d;
  EXPECT_NEAR(p.b(), b, 1e-14);
  EXPECT_NEAR(p.d(), d, 1e-14);
  EXPECT_NEAR(p.e(), e, 1e-14);
  EXPECT_NEAR(p.f(), f, 1e-14);
  EXPECT_NEAR(p.maxCode(), 4.0 * e + f, 1e-13);
  EXPECT_NEAR(p.maxCode(), 4.9018, 1e-3);
}

TEST(Ptf, BranchesMeetInValueAndSlope) {
  const PtfParams p = PtfParams::defaults();
  for (double x : {p.lowBreak(), p.midBreak()}) {
    const double h = x * 1e-7;
    const double left = ptfForward(x - h, p), at = ptfForward(x, p), right = ptfForward(x + h, p);
    // One-sided differences agree to O(h); a slope jump would show up as O(1).
    EXPECT_NEAR(at - left, right - at, 1e-5 * (at - left));
    EXPECT_LE(std::abs(ptfForward(std::nextafter(x, 0.0), p) - at), 1e-9);
  }
}

TEST(Ptf, InverseRoundTripAndClamping) {
  const PtfParams p = PtfParams::defaults();
  for (double x = 1e-6; x <= 1e4; x *= 1.37) {
    EXPECT_NEAR(ptfInverse(ptfForward(x, p), p), x, 1e-10 * x);
  }
  size_t clamps = 0;
  EXPECT_EQ(ptfInverse(-0.1, p, &clamps), 0.0);
  EXPECT_NEAR(ptfInverse(p.maxCode() + 1.0, p, &clamps), 1e4, 1e-8);
  EXPECT_EQ(clamps, 2u);
  EXPECT_EQ(ptfForward(2e4, p), p.maxCode());
}

TEST(Ptf, RejectsBadAnchors) {
  EXPECT_TRUE(throwsError([] { PtfParams::fromAnchors(4.5, 2.4, 1.0, 0.5, 10.0); },
                          ErrorKind::kInvalidArgument));
  EXPECT_TRUE(throwsError([] { PtfParams::fromAnchors(-1.0, 2.4, 0.018, 1.0, 10.0); },
                          ErrorKind::kInvalidArgument));
}

TEST(Lambda, GridAndObjective) {
  EXPECT_EQ(lambdaGridValue(0), 0.10);
  EXPECT_EQ(lambdaGridValue(90), 1.00);
  EXPECT_EQ(lambdaGridValue(kLambdaGridSize - 1), 3.00);
  // floor(0.5 * 255) = 127; |127/255 - 0.5| = 0.5/255
  const std::vector<double> half = {0.5};
  EXPECT_NEAR(lambdaObjective(half, 1.0, 8), 0.5 / 255.0, 1e-15);
}

TEST(Lambda, MatchesExhaustiveSearchWithFirstMinimum) {
  Rng rng(2);
  std::vector<double> samples(500);
  for (double& v : samples) v = std::max(kChromaFloor, std::pow(rng.uniform(), 3.0));
  size_t best = 0;
  for (size_t i = 1; i < kLambdaGridSize; ++i) {
    if (lambdaObjective(samples, lambdaGridValue(i), 10) <
        lambdaObjective(samples, lambdaGridValue(best), 10)) {
      best = i;
    }
  }
  const LambdaChoice got = optimizeLambda(samples, 10);
  EXPECT_EQ(got.lambda, lambdaGridValue(best));
  // Samples exactly on code points tie everywhere: the smallest lambda wins.
  const std::vector<double> ones(10, 1.0);
  EXPECT_EQ(optimizeLambda(ones, 10).lambda, 0.10);
}

TEST(Lambda, LargePlanesAreSubsampledUnlessFullPlane) {
  std::vector<double> big(kLambdaMaxSamples * 2 + 3);
  Rng rng(3);
  for (double& v : big) v = std::max(kChromaFloor, rng.uniform());
  std::vector<double> strided;
  for (size_t i = 0; i < big.size(); i += 3) strided.push_back(big[i]);
  EXPECT_EQ(optimizeLambda(big, 10).objective, optimizeLambda(strided, 10, true).objective);
  EXPECT_NE(optimizeLambda(big, 10, true).objective, optimizeLambda(big, 10).objective);
}

TEST(Chroma, RoundTripWithinBoundAndMeanEqualsObjective) {
  Rng rng(4);
  std::vector<double> plane(4000);
  for (double& v : plane) v = rng.uniform(-0.3, 0.2);
  const ChromaChannelMeta meta = fitChroma(plane, 10, true);
  const auto codes = chromaEncode(plane, meta, 10);
  const auto back = chromaDecode(codes, meta, 10);
  const double bound = chromaRoundTripBound(meta.lambda, 10) * (meta.max - meta.min);
  double codeDomain = 0.0, decoded = 0.0;
  for (size_t i = 0; i < plane.size(); ++i) {
    EXPECT_LE(std::abs(back[i] - plane[i]), bound * (1 + 1e-9));
    const double v = normalizeChroma(plane[i], meta);
    codeDomain += std::abs(std::pow(codes[i] / 1023.0, 1.0 / meta.lambda) - v);
    // Decoding clamps below the floor, which can only shrink the error.
    decoded += std::abs(normalizeChroma(back[i], meta) - v);
  }
  EXPECT_NEAR(codeDomain / plane.size(), meta.objective, 1e-15);
  EXPECT_LE(decoded / plane.size(), meta.objective * (1 + 1e-12));
}

TEST(Chroma, ConstantPlaneAndClamping) {
  const std::vector<double> flat(10, 0.25);
  const ChromaChannelMeta meta = fitChroma(flat, 10);
  EXPECT_EQ(meta.min, 0.25);
  EXPECT_EQ(meta.max, 1.25);
  const auto back = chromaDecode(chromaEncode(flat, meta, 10), meta, 10);
  for (double v : back) EXPECT_NEAR(v, 0.25, 1e-6);
  size_t clamps = 0;
  chromaDecode(std::vector<uint32_t>{5000}, meta, 10, &clamps);
  EXPECT_EQ(clamps, 1u);
}

TEST(PerceptualFrame, ColourRoundTripIsNearLossless) {
  const HdrImage img = makeNaturalImage(48, 32, 3, 9);
  const PerceptualFrame f = perceptualEncode(img, {});
  EXPECT_EQ(f.meta.planes, 3);
  EXPECT_EQ(f.meta.bitDepth, 10);
  for (uint32_t c : f.chromaCode[0]) EXPECT_LE(c, 1023u);
  const HdrImage back = perceptualDecode(f);
  for (size_t c = 0; c < 3; ++c) {
    const auto a = img.plane(c);
    const auto b = back.plane(c);
    EXPECT_GT(psnrFromMse(meanSquaredError(a, b), *std::max_element(a.begin(), a.end())), 60.0);
  }
}

TEST(PerceptualFrame, GreyscaleHasNoChroma) {
  const HdrImage img = makeNaturalImage(16, 16, 1, 10);
  const PerceptualFrame f = perceptualEncode(img, {});
  EXPECT_EQ(f.meta.planes, 1);
  EXPECT_TRUE(f.chromaCode[0].empty());
  const HdrImage back = perceptualDecode(f);
  for (size_t i = 0; i < img.sampleCount(); ++i) {
    EXPECT_NEAR(back.data()[i], img.data()[i], 1e-9 * (1 + img.data()[i]));
  }
}

TEST(PerceptualFrame, BitDepthValidationAndMetadataText) {
  PerceptualOptions opts;
  opts.bitDepth = 9;
  EXPECT_TRUE(throwsError([&] { perceptualEncode(HdrImage(2, 2, 3), opts); },
                          ErrorKind::kInvalidArgument, "bit depth"));
  const PerceptualFrame f = perceptualEncode(makeNaturalImage(8, 8, 3, 1), {});
  const std::string text = formatMetadata(f.meta, 3);
  EXPECT_NE(text.find("frame3.bit_depth=10\n"), std::string::npos);
  EXPECT_NE(text.find("frame3.ptf.c=2.3999999999999999\n"), std::string::npos);
  EXPECT_NE(text.find("frame3.protan.lambda="), std::string::npos);
}

TEST(Intensity, MappingSpansThePtfRange) {
  const PtfParams p = PtfParams::defaults();
  const std::vector<double> plane = {0.5, 1.5, 2.5};
  const IntensityMapping m = fitIntensityMapping(plane, p);
  EXPECT_EQ(m.offset, 0.5);
  EXPECT_EQ(m.scale, 1e4 / 2.0);
  const auto scaled = intensityScale(plane, m, p);
  EXPECT_NEAR(scaled[2], 1e4, 1e-9);
  const auto back = intensityUnscale(scaled, m);
  for (size_t i = 0; i < 3; ++i) EXPECT_NEAR(back[i], plane[i], 1e-12);
  EXPECT_EQ(fitIntensityMapping(std::vector<double>{2.0, 2.0}, p).scale, 1.0);
}
