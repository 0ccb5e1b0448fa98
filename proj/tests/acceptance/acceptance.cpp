// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lfc/aperture.hpp"
#include "lfc/container.hpp"
#include "lfc/entropy.hpp"
#include "lfc/export.hpp"
#include "lfc/light_field_io.hpp"
#include "lfc/metrics.hpp"
#include "lfc/perceptual.hpp"
#include "lfc/pipeline.hpp"
#include "lfc/rng.hpp"
#include "lfc/sweep.hpp"
#include "lfc/synthetic.hpp"
#include "lfc/transform4d.hpp"
#include "golden.hpp"

namespace {

using namespace lfc;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double secondsSince(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// 1. idct4d(dct4d(x)) == x and energy preservation on random blocks.
Outcome transformExactness() {
  const auto t0 = Clock::now();
  Rng rng(101);
  double worstInverse = 0.0;
  double worstParseval = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Block4D x;
    for (double& v : x.values) v = rng.uniform(-1.0, 1.0);
    const Block4D X = dct4d(x);
    const Block4D y = idct4d(X);
    double ex = 0.0, eX = 0.0;
    for (size_t k = 0; k < kBlockSize; ++k) {
      worstInverse = std::max(worstInverse, std::abs(y[k] - x[k]));
      ex += x[k] * x[k];
      eX += X[k] * X[k];
    }
    worstParseval = std::max(worstParseval, std::abs(ex - eX) / ex);
  }
  const double secs = secondsSince(t0);
  return {worstInverse <= 1e-10 && worstParseval <= 1e-10 && secs < 30.0,
          fmt("max |idct(dct(x)) - x| = %.3g, max Parseval rel = %.3g, %.2f s", worstInverse,
              worstParseval, secs)};
}

// 2. Entropy layer is lossless, through the serialized stream.
Outcome entropyLossless() {
  Rng rng(202);
  const auto& zz = ScanOrder::zigzag4d();
  std::vector<QuantizedBlock> all;
  for (int i = 0; i < 10000; ++i) {
    QuantizedBlock b;
    switch (i % 8) {
      case 0:  // all zero
        break;
      case 1:  // single spike anywhere
        b[rng.below(kBlockSize)] = static_cast<int32_t>(rng.below(2001)) - 1000;
        break;
      case 2:  // max run: only the last scan position is set
        b[zz[kBlockSize - 1]] = rng.below(2) ? kMaxQuantLevel : -kMaxQuantLevel;
        break;
      case 3:  // DC only, extreme
        b[0] = rng.below(2) ? kMaxQuantLevel : -kMaxQuantLevel;
        break;
      case 4:  // dense small
        for (auto& v : b.levels) v = static_cast<int32_t>(rng.below(7)) - 3;
        break;
      case 5:  // sparse with long runs
        for (int k = 0; k < 12; ++k) {
          b[zz[rng.below(kBlockSize)]] = static_cast<int32_t>(rng.below(65)) - 32;
        }
        break;
      case 6:  // decaying, codec-like
        for (size_t k = 0; k < kBlockSize; ++k) {
          const double scale = 400.0 / (1.0 + static_cast<double>(k));
          b[zz[k]] = static_cast<int32_t>(std::lround(rng.normal() * scale));
        }
        break;
      default:  // full-range random
        for (auto& v : b.levels) {
          v = static_cast<int32_t>(rng.below(2u * kMaxQuantLevel + 1)) - kMaxQuantLevel;
        }
        break;
    }
    all.push_back(b);
  }
  size_t mismatches = 0;
  uint64_t bits = 0;
  for (size_t first = 0; first < all.size(); first += 250) {
    std::span<const QuantizedBlock> chunk(all.data() + first, 250);
    ByteWriter w;
    writeChannelStream(w, encodeChannel(chunk, static_cast<uint8_t>(first / 250)));
    const auto bytes = w.take();
    ByteReader r(bytes);
    const ChannelStream back = readChannelStream(r);
    bits += back.payloadBits;
    const auto decoded = decodeChannel(back);
    for (size_t i = 0; i < chunk.size(); ++i) mismatches += decoded[i] == chunk[i] ? 0 : 1;
  }
  return {mismatches == 0, fmt("10000 blocks, %.0f mismatching, %.0f payload bits",
                               static_cast<double>(mismatches), static_cast<double>(bits))};
}

// 3. |dequantize(quantize(X)) - X| <= Q/2, and rate falls with d on natural images.
Outcome quantizationBound() {
  Rng rng(303);
  double worstRatio = 0.0;
  for (double q : {1.0, 4.0, 16.0, 64.0}) {
    const QuantMatrix qm = QuantMatrix::uniform(q);
    for (int i = 0; i < 200; ++i) {
      Block4D x;
      for (double& v : x.values) v = rng.uniform(-5000.0, 5000.0);
      const Block4D y = dequantize(quantize(x, qm), qm);
      for (size_t k = 0; k < kBlockSize; ++k) {
        worstRatio = std::max(worstRatio, std::abs(y[k] - x[k]) / (q / 2.0));
      }
    }
  }
  bool monotone = true;
  size_t violations = 0;
  EncodeOptions opts;
  opts.patterns.kind = PatternKind::kOneHotSet;
  opts.patterns.count = 1;
  for (uint64_t img = 0; img < 16; ++img) {
    const LightField4D lf(1, 1, {makeNaturalImage(128, 128, 3, 1000 + img)});
    size_t prev = SIZE_MAX;
    for (int d = 1; d <= 5; ++d) {
      opts.dLevel = d;
      const size_t bytes = encodeLightField(lf, opts).bytes.size();
      if (bytes >= prev) {
        monotone = false;
        ++violations;
      }
      prev = bytes;
    }
  }
  return {worstRatio <= 1.0 && monotone,
          fmt("max error / (Q/2) = %.6f; rate increases with d: %.0f of 64 steps", worstRatio,
              static_cast<double>(violations))};
}

double relativeError(const LightField4D& got, const LightField4D& want) {
  double num = 0.0, den = 0.0;
  for (size_t m = 0; m < want.viewCount(); ++m) {
    const auto a = got.view(m).data();
    const auto b = want.view(m).data();
    for (size_t i = 0; i < a.size(); ++i) {
      num += (a[i] - b[i]) * (a[i] - b[i]);
      den += b[i] * b[i];
    }
  }
  return std::sqrt(num / den);
}

// 4. Reconstruction against exact and dense least-squares oracles.
Outcome apertureOracle() {
  const LightField4D lf = makeParallaxLightField(5, 5, 48, 40, 3, 404);
  const auto oneHot = makePatterns(PatternKind::kOneHotSet, 25, 5, 5, 0);
  const double errOneHot = relativeError(reconstructLinear(acquire(lf, oneHot), 0.0), lf);

  const MixtureLightField mix = makeMixtureLightField(5, 5, 48, 40, 3, 2, 405);
  const auto random = makePatterns(PatternKind::kUniformRandom, 2, 5, 5, 406);
  const AcquisitionSet acq = acquire(mix.lightField, random);
  const ViewBasis basis = learnViewBasis(mix.lightField, 2);
  const LightField4D rec = reconstructLinear(acq, kDefaultRidge, &basis);

  // Oracle: per-pixel dense least squares on the true mixture weights.
  const Eigen::MatrixXd B = patternMatrix(random) * mix.weights;
  const auto qr = B.colPivHouseholderQr();
  std::vector<HdrImage> views;
  const size_t samples = acq.images[0].sampleCount();
  std::vector<std::vector<double>> data(25, std::vector<double>(samples));
  for (size_t i = 0; i < samples; ++i) {
    Eigen::VectorXd a(2);
    a << acq.images[0].data()[i], acq.images[1].data()[i];
    const Eigen::VectorXd x = mix.weights * qr.solve(a);
    for (size_t m = 0; m < 25; ++m) data[m][i] = x(static_cast<Eigen::Index>(m));
  }
  for (auto& d : data) views.emplace_back(48, 40, 3, std::move(d));
  const LightField4D oracle(5, 5, std::move(views));

  const double errMix = relativeError(rec, mix.lightField);
  const double errVsOracle = relativeError(rec, oracle);
  const double errOracle = relativeError(oracle, mix.lightField);
  return {errOneHot < 1e-9 && errMix < 1e-6 && errVsOracle < 1e-6,
          fmt("one-hot N=M rel = %.3g; rank-2 N=2 rel = %.3g (vs oracle %.3g, oracle vs truth "
              "%.3g)",
              errOneHot, errMix, errVsOracle, errOracle)};
}

// 5. Perceptual chain round trip, PTF continuity, lambda search vs exhaustive grid.
Outcome perceptualRoundTrip() {
  constexpr double kThresholdDb = 60.0;
  PerceptualOptions opts;
  double worst = INFINITY;
  for (uint64_t i = 0; i < 100; ++i) {
    const HdrImage img = makeNaturalImage(64, 64, 3, 5000 + i);
    const HdrImage back = perceptualDecode(perceptualEncode(img, opts));
    for (size_t c = 0; c < 3; ++c) {
      const auto a = img.plane(c);
      const auto b = back.plane(c);
      const double peak = *std::max_element(a.begin(), a.end());
      worst = std::min(worst, psnrFromMse(meanSquaredError(a, b), peak));
    }
  }

  const PtfParams p = PtfParams::defaults();
  const double s = p.lowBreak(), q = p.midBreak();
  const double gapLow = std::abs(p.a() * s - (p.b() * std::pow(s, 1.0 / p.c()) + p.d()));
  const double gapMid =
      std::abs(p.b() * std::pow(q, 1.0 / p.c()) + p.d() - (p.e() * std::log10(q) + p.f()));
  const double gap = std::max(gapLow, gapMid);

  Rng rng(505);
  size_t lambdaMismatch = 0;
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<double> samples(3000);
    const double skew = rng.uniform(0.2, 5.0);
    for (double& v : samples) v = std::max(kChromaFloor, std::pow(rng.uniform(), skew));
    const LambdaChoice got = optimizeLambda(samples, 10);
    size_t best = 0;
    double bestObj = lambdaObjective(samples, lambdaGridValue(0), 10);
    for (size_t k = 1; k < kLambdaGridSize; ++k) {
      const double obj = lambdaObjective(samples, lambdaGridValue(k), 10);
      if (obj < bestObj) {
        bestObj = obj;
        best = k;
      }
    }
    if (got.lambda != lambdaGridValue(best) || got.objective != bestObj) ++lambdaMismatch;
  }
  return {worst >= kThresholdDb && gap <= 1e-9 && lambdaMismatch == 0,
          fmt("min per-channel PSNR = %.2f dB (>= %.0f); PTF branch gap = %.3g; lambda "
              "mismatches = %.0f",
              worst, kThresholdDb, gap, static_cast<double>(lambdaMismatch))};
}

// 6. Bjontegaard deltas on exact cubic curves.
Outcome bjontegaard() {
  const std::vector<double> rates = {0.1, 0.2, 0.4, 0.8, 1.6};
  auto curve = [](double r) {
    const double x = std::log10(r);
    return 40.0 + 8.0 * x - 1.5 * x * x + 0.3 * x * x * x;
  };
  std::vector<RDPoint> ref, halved, shifted;
  for (double r : rates) {
    ref.push_back({r, curve(r)});
    halved.push_back({r / 2.0, curve(r)});
    shifted.push_back({r, curve(r) + 1.0});
  }
  const BDResult same = bdMetrics(ref, ref);
  const BDResult half = bdMetrics(ref, halved);
  const BDResult up = bdMetrics(ref, shifted);
  const bool ok = std::abs(same.bdRate) < 1e-9 && std::abs(same.bdPsnr) < 1e-9 &&
                  std::abs(half.bdRate + 50.0) <= 1e-6 && std::abs(up.bdPsnr - 1.0) <= 1e-6;
  return {ok, fmt("identical %.2g %% / %.2g dB; halved rate %.9f %%; +1 dB shift %.9f dB",
                  same.bdRate, same.bdPsnr, half.bdRate, up.bdPsnr)};
}

// 7. d = 1..5 sweep on a 5x5, 256x256 light field.
Outcome endToEndSweep() {
  const auto t0 = Clock::now();
  const MixtureLightField mix = makeMixtureLightField(5, 5, 256, 256, 3, 2, 707);
  SweepOptions opts;
  opts.encode.patterns.kind = PatternKind::kUniformRandom;
  opts.encode.patterns.count = 2;
  opts.encode.patterns.seed = 708;
  opts.encode.basis = BasisMode::kPca;
  const SweepResult r = rdSweep(mix.lightField, opts);
  const double secs = secondsSince(t0);
  bool ok = r.rows.size() == 5 && secs < 300.0;
  std::string rows;
  for (size_t i = 0; i < r.rows.size(); ++i) {
    if (i > 0) {
      ok = ok && r.rows[i].totalBytes < r.rows[i - 1].totalBytes &&
           r.rows[i].psnrMeanDb <= r.rows[i - 1].psnrMeanDb;
    }
    rows += fmt(" d%.0f:%.4fbpp/%.2fdB", r.rows[i].d, r.rows[i].bpp, r.rows[i].psnrMeanDb);
  }
  return {ok, "[" + rows.substr(1) + "] " + fmt("%.1f s", secs)};
}

// 8. Golden containers and the 10-bit export round trip.
Outcome bitExactContainer() {
  std::string detail;
  bool ok = true;
  for (const auto& g : testdata::kGoldenFiles) {
    const auto bytes = readFileBytes(std::filesystem::path(LFC_TEST_DATA_DIR) / g.file);
    const bool fileOk = testdata::fnv1a(bytes) == g.fileHash;
    const Container c = readContainer(bytes);
    const bool reserialized = writeContainer(c) == bytes;
    uint64_t levelHash = testdata::kFnvOffset;
    for (const auto& ch : c.channels) {
      for (const auto& b : decodeChannel(ch)) levelHash = testdata::fnv1aLevels(b, levelHash);
    }
    const DecodeResult a = decodeLightField(bytes);
    const DecodeResult b = decodeLightField(bytes);
    bool same = a.lightField.viewCount() == b.lightField.viewCount();
    for (size_t m = 0; same && m < a.lightField.viewCount(); ++m) {
      same = a.lightField.view(m) == b.lightField.view(m);
    }
    const bool good = fileOk && reserialized && levelHash == g.levelHash && same;
    ok = ok && good;
    char hashes[96];
    std::snprintf(hashes, sizeof hashes, " (file %016llx, levels %016llx)",
                  static_cast<unsigned long long>(testdata::fnv1a(bytes)),
                  static_cast<unsigned long long>(levelHash));
    detail += g.file + std::string(good ? " ok; " : " MISMATCH") + (good ? "" : hashes) +
              (good ? "" : "; ");
  }

  const LightField4D lf = makeParallaxLightField(3, 3, 70, 46, 3, 808);
  const auto patterns = makePatterns(PatternKind::kUniformRandom, 2, 3, 3, 809);
  const AcquisitionSet acq = acquire(lf, patterns);
  const auto dir = std::filesystem::temp_directory_path() / "lfc4_acceptance_export";
  for (bool sub : {false, true}) {
    std::filesystem::remove_all(dir);
    const auto frames = exportAcquisition(acq, PerceptualOptions{}, sub, dir);
    std::vector<ExportedFrame> back;
    importAcquisition(dir, &back);
    const bool good = back == frames && frames[0].meta.bitDepth == 10;
    ok = ok && good;
    detail += std::string(sub ? "export 4:2:0 " : "export 4:4:4 ") +
              (good ? "bit-identical" : "MISMATCH") + (sub ? "" : "; ");
  }
  std::filesystem::remove_all(dir);
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"transform exactness", transformExactness},
      {"entropy losslessness", entropyLossless},
      {"quantization bound", quantizationBound},
      {"aperture oracle", apertureOracle},
      {"perceptual round trip", perceptualRoundTrip},
      {"bjontegaard correctness", bjontegaard},
      {"end-to-end RD behaviour", endToEndSweep},
      {"bit-exact container", bitExactContainer},
  };
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
