#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "lfc/image.hpp"

namespace lfc {

// Transmittance mask r_n(s,t) over the S x T aperture grid, row-major.
class AperturePattern {
 public:
  AperturePattern(size_t rows, size_t cols, std::vector<double> transmittance);

  size_t rows() const noexcept { return rows_; }
  size_t cols() const noexcept { return cols_; }
  size_t size() const noexcept { return values_.size(); }
  double at(size_t s, size_t t) const { return values_[s * cols_ + t]; }
  double operator[](size_t m) const { return values_[m]; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const AperturePattern&, const AperturePattern&) = default;

 private:
  size_t rows_;
  size_t cols_;
  std::vector<double> values_;
};

// N coded exposures a_n(u,v) of one light field and the masks that made them.
struct AcquisitionSet {
  std::vector<AperturePattern> patterns;
  std::vector<HdrImage> images;

  size_t count() const noexcept { return images.size(); }
};

// a_n(u,v) = sum_{s,t} r_n(s,t) l_{s,t}(u,v), accumulated in row-major view
// order for every pixel and channel.
AcquisitionSet acquire(const LightField4D& lf, std::span<const AperturePattern> patterns);

// N x M matrix whose row n is pattern n flattened row-major.
Eigen::MatrixXd patternMatrix(std::span<const AperturePattern> patterns);

// Optional linear prior for reconstruction: views are constrained to
// X = W z, with W an M x K matrix of view-mixture columns. Without a basis the
// reconstruction is the plain minimum-norm solution over all M views.
class ViewBasis {
 public:
  explicit ViewBasis(Eigen::MatrixXd columns);

  size_t viewCount() const noexcept { return static_cast<size_t>(columns_.rows()); }
  size_t rank() const noexcept { return static_cast<size_t>(columns_.cols()); }
  const Eigen::MatrixXd& matrix() const noexcept { return columns_; }

 private:
  Eigen::MatrixXd columns_;
};

// Top-K eigenvectors of the (uncentred) view Gram matrix, i.e. the linear
// autoencoder optimum for a K-dimensional view code.
ViewBasis learnViewBasis(const LightField4D& lf, size_t rank);

// M x N operator R with x_hat = R a per pixel. With ridge > 0 it is
// W B^T (B B^T + ridge I)^-1 with B = A W; with ridge == 0 it is W pinv(B).
Eigen::MatrixXd reconstructionOperator(std::span<const AperturePattern> patterns,
                                       double ridge, const ViewBasis* basis = nullptr);

constexpr double kDefaultRidge = 1e-8;

// Unclamped per-view solutions, views[m] holding the samples of view m in
// HdrImage layout. Values may be slightly negative.
struct ReconstructedViews {
  size_t rows = 0;
  size_t cols = 0;
  size_t width = 0;
  size_t height = 0;
  size_t channels = 0;
  std::vector<std::vector<double>> views;
};

ReconstructedViews solveViews(const AcquisitionSet& acq, double ridge = kDefaultRidge,
                              const ViewBasis* basis = nullptr);

// solveViews clamped at zero to form a valid light field.
LightField4D reconstructLinear(const AcquisitionSet& acq, double ridge = kDefaultRidge,
                               const ViewBasis* basis = nullptr);

enum class PatternKind { kUniformRandom, kOneHotSet, kPinholePair };

PatternKind parsePatternKind(std::string_view name);
std::string_view patternKindName(PatternKind kind);

std::vector<AperturePattern> makePatterns(PatternKind kind, size_t count, size_t rows,
                                          size_t cols, uint64_t seed);

// Plain-text grid: one line per aperture row, whitespace-separated values,
// '#' starts a comment.
void savePatternFile(const AperturePattern& pattern, const std::filesystem::path& path);
AperturePattern loadPatternFile(const std::filesystem::path& path);

}  // namespace lfc
