#include "lfc/metrics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "lfc/error.hpp"

namespace lfc {

namespace {

constexpr std::string_view kModule = "metrics";

struct Curve {
  std::vector<double> logRate;
  std::vector<double> psnr;
};

Curve prepareCurve(std::span<const RDPoint> points, const char* label) {
  if (points.size() < 4) {
    fail(ErrorKind::kInvalidArgument, kModule,
         std::string(label) + " curve needs at least 4 points for a cubic fit");
  }
  std::vector<RDPoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const RDPoint& a, const RDPoint& b) { return a.rate < b.rate; });
  Curve c;
  for (size_t i = 0; i < sorted.size(); ++i) {
    const RDPoint& p = sorted[i];
    if (!(p.rate > 0.0) || !std::isfinite(p.rate) || !std::isfinite(p.psnr)) {
      fail(ErrorKind::kInvalidArgument, kModule,
           std::string(label) + " curve has a non-positive rate or non-finite PSNR");
    }
    if (i > 0 && !(p.rate > sorted[i - 1].rate && p.psnr > sorted[i - 1].psnr)) {
      fail(ErrorKind::kInvalidArgument, kModule,
           std::string(label) + " curve is not strictly monotone");
    }
    c.logRate.push_back(std::log10(p.rate));
    c.psnr.push_back(p.psnr);
  }
  return c;
}

double integrateCubic(const std::vector<double>& c, double lo, double hi) {
  auto antiderivative = [&](double x) {
    return ((c[3] / 4.0 * x + c[2] / 3.0) * x + c[1] / 2.0) * x * x + c[0] * x;
  };
  return antiderivative(hi) - antiderivative(lo);
}

// Mean difference of the test fit over the reference fit on the overlap.
double meanFitGap(const std::vector<double>& refX, const std::vector<double>& refY,
                  const std::vector<double>& testX, const std::vector<double>& testY) {
  const double lo = std::max(refX.front(), testX.front());
  const double hi = std::min(refX.back(), testX.back());
  if (!(hi > lo)) fail(ErrorKind::kInvalidArgument, kModule, "RD curves do not overlap");
  const auto refFit = fitCubic(refX, refY);
  const auto testFit = fitCubic(testX, testY);
  return (integrateCubic(testFit, lo, hi) - integrateCubic(refFit, lo, hi)) / (hi - lo);
}

std::vector<double> sortedBy(const std::vector<double>& keys, const std::vector<double>& values,
                             std::vector<double>& sortedKeys) {
  std::vector<size_t> idx(keys.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return keys[a] < keys[b]; });
  std::vector<double> out;
  sortedKeys.clear();
  for (size_t i : idx) {
    sortedKeys.push_back(keys[i]);
    out.push_back(values[i]);
  }
  return out;
}

}  // namespace

double meanSquaredError(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size() && !a.empty(), kModule, "shape mismatch");
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum / static_cast<double>(a.size());
}

double psnrFromMse(double mse, double peak) {
  require(peak > 0.0, kModule, "PSNR peak must be > 0");
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

double psnr(const HdrImage& a, const HdrImage& b, double peak) {
  require(a.sameShape(b), kModule, "shape mismatch");
  return psnrFromMse(meanSquaredError(a.data(), b.data()), peak);
}

LightFieldPsnr psnr(const LightField4D& a, const LightField4D& b, double peak) {
  require(a.angularRows() == b.angularRows() && a.angularCols() == b.angularCols(), kModule,
          "view grid mismatch");
  LightFieldPsnr out;
  double mseSum = 0.0;
  out.min = std::numeric_limits<double>::infinity();
  for (size_t m = 0; m < a.viewCount(); ++m) {
    require(a.view(m).sameShape(b.view(m)), kModule, "shape mismatch");
    const double mse = meanSquaredError(a.view(m).data(), b.view(m).data());
    mseSum += mse;
    out.perView.push_back(psnrFromMse(mse, peak));
    out.min = std::min(out.min, out.perView.back());
  }
  out.mean = psnrFromMse(mseSum / static_cast<double>(a.viewCount()), peak);
  return out;
}

std::vector<double> fitCubic(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 4, kModule, "cubic fit needs >= 4 points");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd v(n, 4);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double xi = x[static_cast<size_t>(i)];
    v(i, 0) = 1.0;
    v(i, 1) = xi;
    v(i, 2) = xi * xi;
    v(i, 3) = xi * xi * xi;
    rhs(i) = y[static_cast<size_t>(i)];
  }
  const Eigen::VectorXd c = v.colPivHouseholderQr().solve(rhs);
  return {c(0), c(1), c(2), c(3)};
}

BDResult bdMetrics(std::span<const RDPoint> reference, std::span<const RDPoint> test) {
  const Curve ref = prepareCurve(reference, "reference");
  const Curve tst = prepareCurve(test, "test");
  BDResult out;
  out.bdPsnr = meanFitGap(ref.logRate, ref.psnr, tst.logRate, tst.psnr);

  std::vector<double> refPsnr, tstPsnr;
  const auto refLog = sortedBy(ref.psnr, ref.logRate, refPsnr);
  const auto tstLog = sortedBy(tst.psnr, tst.logRate, tstPsnr);
  const double logGap = meanFitGap(refPsnr, refLog, tstPsnr, tstLog);
  out.bdRate = (std::pow(10.0, logGap) - 1.0) * 100.0;
  return out;
}

void writeSweepCsv(std::ostream& out, std::span<const SweepRow> rows) {
  out << kSweepCsvHeader << "\n";
  char buf[256];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%llu,%.17g,%.17g,%.17g\n", r.d, r.qstep,
                  static_cast<unsigned long long>(r.totalBytes), r.bpp, r.psnrMeanDb,
                  r.psnrMinDb);
    out << buf;
  }
}

std::vector<SweepRow> readSweepCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::kFormat, kModule, "empty sweep CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSweepCsvHeader) fail(ErrorKind::kFormat, kModule, "unexpected sweep CSV header");
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 6) fail(ErrorKind::kFormat, kModule, "sweep CSV row needs 6 fields");
    try {
      SweepRow r;
      r.d = std::stoi(fields[0]);
      r.qstep = std::stod(fields[1]);
      r.totalBytes = std::stoull(fields[2]);
      r.bpp = std::stod(fields[3]);
      r.psnrMeanDb = std::stod(fields[4]);
      r.psnrMinDb = std::stod(fields[5]);
      rows.push_back(r);
    } catch (const std::exception&) {
      fail(ErrorKind::kFormat, kModule, "bad sweep CSV row: " + line);
    }
  }
  return rows;
}

std::vector<RDPoint> toRdPoints(std::span<const SweepRow> rows) {
  std::vector<RDPoint> out;
  for (const SweepRow& r : rows) out.push_back({r.bpp, r.psnrMeanDb});
  return out;
}

}  // namespace lfc
