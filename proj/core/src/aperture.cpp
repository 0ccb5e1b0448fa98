#include "lfc/aperture.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "lfc/error.hpp"
#include "lfc/rng.hpp"

namespace lfc {

namespace {
constexpr std::string_view kModule = "aperture";
}

AperturePattern::AperturePattern(size_t rows, size_t cols, std::vector<double> transmittance)
    : rows_(rows), cols_(cols), values_(std::move(transmittance)) {
  require(rows > 0 && cols > 0, kModule, "pattern grid must be non-empty");
  require(values_.size() == rows * cols, kModule, "pattern value count mismatch");
  bool anyOpen = false;
  for (double r : values_) {
    require(std::isfinite(r) && r >= 0.0 && r <= 1.0, kModule,
            "transmittance outside [0, 1]");
    anyOpen = anyOpen || r > 0.0;
  }
  require(anyOpen, kModule, "pattern blocks every aperture position");
}

AcquisitionSet acquire(const LightField4D& lf, std::span<const AperturePattern> patterns) {
  require(!patterns.empty(), kModule, "at least one pattern is required");
  require(patterns.size() <= lf.viewCount(), kModule,
          "more acquisitions than views (N > M)");
  const size_t views = lf.viewCount();
  AcquisitionSet out;
  for (const auto& p : patterns) {
    if (p.rows() != lf.angularRows() || p.cols() != lf.angularCols()) {
      fail(ErrorKind::kInvalidArgument, kModule,
           "pattern grid " + std::to_string(p.rows()) + "x" + std::to_string(p.cols()) +
               " does not match light field " + std::to_string(lf.angularRows()) + "x" +
               std::to_string(lf.angularCols()));
    }
    std::vector<double> sum(lf.view(0).sampleCount(), 0.0);
    for (size_t m = 0; m < views; ++m) {
      const double r = p[m];
      if (r == 0.0) continue;
      const auto src = lf.view(m).data();
      for (size_t i = 0; i < sum.size(); ++i) sum[i] += r * src[i];
    }
    out.images.emplace_back(lf.width(), lf.height(), lf.channels(), std::move(sum));
    out.patterns.push_back(p);
  }
  return out;
}

Eigen::MatrixXd patternMatrix(std::span<const AperturePattern> patterns) {
  require(!patterns.empty(), kModule, "at least one pattern is required");
  const size_t m = patterns[0].size();
  Eigen::MatrixXd a(static_cast<Eigen::Index>(patterns.size()), static_cast<Eigen::Index>(m));
  for (size_t n = 0; n < patterns.size(); ++n) {
    require(patterns[n].size() == m, kModule, "patterns have different grid sizes");
    for (size_t j = 0; j < m; ++j) a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(j)) = patterns[n][j];
  }
  return a;
}

ViewBasis::ViewBasis(Eigen::MatrixXd columns) : columns_(std::move(columns)) {
  require(columns_.rows() > 0 && columns_.cols() > 0, kModule, "empty view basis");
  require(columns_.cols() <= columns_.rows(), kModule, "basis rank exceeds view count");
  require(columns_.allFinite(), kModule, "non-finite view basis");
}

ViewBasis learnViewBasis(const LightField4D& lf, size_t rank) {
  const auto m = static_cast<Eigen::Index>(lf.viewCount());
  require(rank >= 1 && static_cast<Eigen::Index>(rank) <= m, kModule,
          "basis rank must be in [1, M]");
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto a = lf.view(static_cast<size_t>(i)).data();
    for (Eigen::Index j = i; j < m; ++j) {
      const auto b = lf.view(static_cast<size_t>(j)).data();
      double dot = 0.0;
      for (size_t k = 0; k < a.size(); ++k) dot += a[k] * b[k];
      gram(i, j) = dot;
      gram(j, i) = dot;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  require(solver.info() == Eigen::Success, kModule, "eigen-decomposition failed");
  // Eigenvalues ascend; take the last `rank` columns, largest first.
  Eigen::MatrixXd basis(m, static_cast<Eigen::Index>(rank));
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(rank); ++k) {
    Eigen::VectorXd v = solver.eigenvectors().col(m - 1 - k);
    Eigen::Index pivot = 0;
    v.cwiseAbs().maxCoeff(&pivot);
    if (v(pivot) < 0.0) v = -v;
    basis.col(k) = v;
  }
  return ViewBasis(std::move(basis));
}

Eigen::MatrixXd reconstructionOperator(std::span<const AperturePattern> patterns,
                                       double ridge, const ViewBasis* basis) {
  require(std::isfinite(ridge) && ridge >= 0.0, kModule, "ridge must be non-negative");
  const Eigen::MatrixXd a = patternMatrix(patterns);
  require(a.cwiseAbs().maxCoeff() > 0.0, kModule, "zero pattern matrix");
  if (basis != nullptr) {
    require(basis->viewCount() == static_cast<size_t>(a.cols()), kModule,
            "view basis size does not match the pattern grid");
  }
  const Eigen::MatrixXd b = basis ? Eigen::MatrixXd(a * basis->matrix()) : a;
  Eigen::MatrixXd solve;
  if (ridge > 0.0) {
    const Eigen::Index n = b.rows();
    const Eigen::MatrixXd gram =
        b * b.transpose() + ridge * Eigen::MatrixXd::Identity(n, n);
    solve = b.transpose() * gram.ldlt().solve(Eigen::MatrixXd::Identity(n, n));
  } else {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(b);
    solve = cod.pseudoInverse();
  }
  return basis ? Eigen::MatrixXd(basis->matrix() * solve) : solve;
}

ReconstructedViews solveViews(const AcquisitionSet& acq, double ridge,
                              const ViewBasis* basis) {
  require(!acq.images.empty() && acq.images.size() == acq.patterns.size(), kModule,
          "acquisition set needs one pattern per image");
  const HdrImage& first = acq.images[0];
  for (const auto& img : acq.images) {
    require(img.sameShape(first), kModule, "acquired images differ in shape");
  }
  ReconstructedViews out;
  out.rows = acq.patterns[0].rows();
  out.cols = acq.patterns[0].cols();
  out.width = first.width();
  out.height = first.height();
  out.channels = first.channels();
  const Eigen::MatrixXd op = reconstructionOperator(acq.patterns, ridge, basis);
  const size_t views = out.rows * out.cols;
  const size_t n = acq.images.size();
  const size_t samples = first.sampleCount();

  out.views.assign(views, std::vector<double>(samples));
  std::vector<std::span<const double>> in;
  for (const auto& img : acq.images) in.push_back(img.data());
  for (size_t i = 0; i < samples; ++i) {
    for (size_t m = 0; m < views; ++m) {
      double v = 0.0;
      for (size_t k = 0; k < n; ++k) {
        v += op(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) * in[k][i];
      }
      out.views[m][i] = v;
    }
  }
  return out;
}

LightField4D reconstructLinear(const AcquisitionSet& acq, double ridge,
                               const ViewBasis* basis) {
  ReconstructedViews raw = solveViews(acq, ridge, basis);
  std::vector<HdrImage> images;
  images.reserve(raw.views.size());
  for (auto& data : raw.views) {
    for (double& v : data) v = v > 0.0 ? v : 0.0;
    images.emplace_back(raw.width, raw.height, raw.channels, std::move(data));
  }
  return LightField4D(raw.rows, raw.cols, std::move(images));
}

PatternKind parsePatternKind(std::string_view name) {
  if (name == "uniform-random") return PatternKind::kUniformRandom;
  if (name == "one-hot-set") return PatternKind::kOneHotSet;
  if (name == "pinhole-pair") return PatternKind::kPinholePair;
  fail(ErrorKind::kInvalidArgument, kModule, "unknown pattern kind '" + std::string(name) + "'");
}

std::string_view patternKindName(PatternKind kind) {
  switch (kind) {
    case PatternKind::kUniformRandom: return "uniform-random";
    case PatternKind::kOneHotSet: return "one-hot-set";
    case PatternKind::kPinholePair: return "pinhole-pair";
  }
  return "unknown";
}

std::vector<AperturePattern> makePatterns(PatternKind kind, size_t count, size_t rows,
                                          size_t cols, uint64_t seed) {
  require(count >= 1, kModule, "pattern count must be >= 1");
  require(rows > 0 && cols > 0, kModule, "pattern grid must be non-empty");
  const size_t m = rows * cols;
  std::vector<AperturePattern> out;
  auto oneHot = [&](size_t index) {
    std::vector<double> v(m, 0.0);
    v[index] = 1.0;
    out.emplace_back(rows, cols, std::move(v));
  };
  switch (kind) {
    case PatternKind::kUniformRandom: {
      Rng rng(seed);
      for (size_t n = 0; n < count; ++n) {
        std::vector<double> v(m);
        for (double& r : v) r = rng.uniform();
        // An all-zero draw is measure-zero but would violate the invariant.
        if (*std::max_element(v.begin(), v.end()) == 0.0) v[0] = 1.0;
        out.emplace_back(rows, cols, std::move(v));
      }
      break;
    }
    case PatternKind::kOneHotSet:
      require(count <= m, kModule, "one-hot-set needs N <= S*T");
      // Evenly spaced positions; N == M yields the identity basis.
      for (size_t n = 0; n < count; ++n) oneHot(n * m / count);
      break;
    case PatternKind::kPinholePair: {
      require(count == 2, kModule, "pinhole-pair produces exactly two patterns");
      require(m >= 2, kModule, "pinhole-pair needs at least two views");
      // Left and right ends of the central aperture row (a stereo baseline);
      // a single-column grid falls back to top and bottom.
      if (cols >= 2) {
        const size_t s = rows / 2;
        oneHot(s * cols);
        oneHot(s * cols + cols - 1);
      } else {
        oneHot(0);
        oneHot(m - 1);
      }
      break;
    }
  }
  return out;
}

void savePatternFile(const AperturePattern& pattern, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::kIo, kModule, "cannot create " + path.string());
  out << "# aperture transmittance " << pattern.rows() << "x" << pattern.cols() << "\n";
  char buf[32];
  for (size_t s = 0; s < pattern.rows(); ++s) {
    for (size_t t = 0; t < pattern.cols(); ++t) {
      std::snprintf(buf, sizeof(buf), "%.17g", pattern.at(s, t));
      out << (t ? " " : "") << buf;
    }
    out << "\n";
  }
  if (!out) fail(ErrorKind::kIo, kModule, "write failed: " + path.string());
}

AperturePattern loadPatternFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, kModule, "cannot open " + path.string());
  std::vector<double> values;
  size_t rows = 0;
  size_t cols = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<double> row;
    std::string token;
    while (ls >> token) {
      char* end = nullptr;
      const double v = std::strtod(token.c_str(), &end);
      if (end != token.c_str() + token.size()) {
        fail(ErrorKind::kFormat, kModule, path.string() + ": bad value '" + token + "'");
      }
      row.push_back(v);
    }
    if (row.empty()) continue;
    if (cols == 0) cols = row.size();
    if (row.size() != cols) {
      fail(ErrorKind::kFormat, kModule, path.string() + ": ragged pattern grid");
    }
    values.insert(values.end(), row.begin(), row.end());
    ++rows;
  }
  if (rows == 0) fail(ErrorKind::kFormat, kModule, path.string() + ": empty pattern file");
  return AperturePattern(rows, cols, std::move(values));
}

}  // namespace lfc
