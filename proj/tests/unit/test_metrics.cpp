#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "lfc/metrics.hpp"
#include "lfc/synthetic.hpp"
#include "util.hpp"

using namespace lfc;
using testutil::throwsError;

namespace {

std::vector<RDPoint> cubicCurve(double rateScale, double psnrShift) {
  std::vector<RDPoint> out;
  for (double r : {0.05, 0.1, 0.2, 0.4, 0.8, 1.6}) {
    const double x = std::log10(r);
    out.push_back({r * rateScale, 35.0 + 6.0 * x - 0.8 * x * x + 0.1 * x * x * x + psnrShift});
  }
  return out;
}

}  // namespace

TEST(Psnr, KnownValues) {
  const std::vector<double> a = {0.0, 0.0, 0.0, 0.0};
  const std::vector<double> b = {0.1, -0.1, 0.1, -0.1};
  EXPECT_DOUBLE_EQ(meanSquaredError(a, b), 0.01);
  EXPECT_NEAR(psnrFromMse(0.01, 1.0), 20.0, 1e-12);
  EXPECT_NEAR(psnrFromMse(0.01, 10.0), 40.0, 1e-12);
  EXPECT_TRUE(std::isinf(psnrFromMse(0.0, 1.0)));
  const HdrImage img = makeNaturalImage(8, 8, 3, 1);
  EXPECT_TRUE(std::isinf(psnr(img, img, 1.0)));
  EXPECT_TRUE(throwsError([] { psnrFromMse(0.1, 0.0); }, ErrorKind::kInvalidArgument));
}

TEST(Psnr, LightFieldMeanComesFromAveragedMse) {
  const LightField4D ref(1, 2, {HdrImage(1, 1, 1, {0.0}), HdrImage(1, 1, 1, {0.0})});
  const LightField4D got(1, 2, {HdrImage(1, 1, 1, {0.1}), HdrImage(1, 1, 1, {0.01})});
  const LightFieldPsnr q = psnr(ref, got, 1.0);
  EXPECT_NEAR(q.perView[0], 20.0, 1e-12);
  EXPECT_NEAR(q.perView[1], 40.0, 1e-12);
  EXPECT_NEAR(q.mean, -10.0 * std::log10((0.01 + 0.0001) / 2.0), 1e-12);
  EXPECT_NEAR(q.min, 20.0, 1e-12);
}

TEST(Bjontegaard, IdenticalCurvesGiveZero) {
  const auto c = cubicCurve(1.0, 0.0);
  const BDResult r = bdMetrics(c, c);
  EXPECT_NEAR(r.bdRate, 0.0, 1e-9);
  EXPECT_NEAR(r.bdPsnr, 0.0, 1e-9);
}

TEST(Bjontegaard, HalvedRateAndShiftedQuality) {
  const auto ref = cubicCurve(1.0, 0.0);
  EXPECT_NEAR(bdMetrics(ref, cubicCurve(0.5, 0.0)).bdRate, -50.0, 1e-6);
  EXPECT_NEAR(bdMetrics(ref, cubicCurve(2.0, 0.0)).bdRate, 100.0, 1e-6);
  EXPECT_NEAR(bdMetrics(ref, cubicCurve(1.0, 1.0)).bdPsnr, 1.0, 1e-6);
  EXPECT_NEAR(bdMetrics(ref, cubicCurve(1.0, -2.5)).bdPsnr, -2.5, 1e-6);
}

TEST(Bjontegaard, InputOrderDoesNotMatter) {
  auto ref = cubicCurve(1.0, 0.0);
  auto test = cubicCurve(0.7, 0.3);
  const BDResult a = bdMetrics(ref, test);
  std::reverse(ref.begin(), ref.end());
  const BDResult b = bdMetrics(ref, test);
  EXPECT_NEAR(a.bdRate, b.bdRate, 1e-12);
  EXPECT_NEAR(a.bdPsnr, b.bdPsnr, 1e-12);
}

TEST(Bjontegaard, RejectsShortOrNonMonotoneCurves) {
  const auto ref = cubicCurve(1.0, 0.0);
  const std::vector<RDPoint> three(ref.begin(), ref.begin() + 3);
  EXPECT_TRUE(throwsError([&] { bdMetrics(ref, three); }, ErrorKind::kInvalidArgument, "4 points"));
  auto bent = ref;
  bent[3].psnr = bent[2].psnr - 1.0;
  EXPECT_TRUE(throwsError([&] { bdMetrics(ref, bent); }, ErrorKind::kInvalidArgument, "monotone"));
  EXPECT_TRUE(throwsError([&] { bdMetrics(ref, cubicCurve(1000.0, 0.0)); },
                          ErrorKind::kInvalidArgument, "overlap"));
}

TEST(Bjontegaard, CubicFitIsExactOnCubics) {
  const std::vector<double> x = {-1.0, -0.3, 0.2, 0.9, 1.4};
  std::vector<double> y;
  for (double v : x) y.push_back(2.0 - v + 0.5 * v * v - 0.25 * v * v * v);
  const auto c = fitCubic(x, y);
  EXPECT_NEAR(c[0], 2.0, 1e-10);
  EXPECT_NEAR(c[1], -1.0, 1e-10);
  EXPECT_NEAR(c[2], 0.5, 1e-10);
  EXPECT_NEAR(c[3], -0.25, 1e-10);
}

TEST(SweepCsv, RoundTripAndValidation) {
  const std::vector<SweepRow> rows = {{1, 0.001, 1000, 1.5, 40.25, 38.0},
                                      {2, 0.002, 800, 1.2, 38.5, 36.0}};
  std::stringstream s;
  writeSweepCsv(s, rows);
  const std::string text = s.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), kSweepCsvHeader);
  const auto back = readSweepCsv(s);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].d, 2);
  EXPECT_EQ(back[1].totalBytes, 800u);
  EXPECT_EQ(back[0].psnrMeanDb, 40.25);
  const auto pts = toRdPoints(back);
  EXPECT_EQ(pts[0].rate, 1.5);
  EXPECT_EQ(pts[0].psnr, 40.25);

  std::stringstream bad("d,rate\n1,2\n");
  EXPECT_TRUE(throwsError([&] { readSweepCsv(bad); }, ErrorKind::kFormat, "header"));
  std::stringstream shortRow(std::string(kSweepCsvHeader) + "\n1,2,3\n");
  EXPECT_TRUE(throwsError([&] { readSweepCsv(shortRow); }, ErrorKind::kFormat));
}
