#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "intdim/errors.hpp"
#include "intdim/format.hpp"

namespace intdim {

inline constexpr double kDedupTolerance = 1e-12;
inline constexpr std::int64_t kDefaultPointBudget = 1'000'000;

/// Where a cloud came from: generator name plus parameters, or a file path.
struct Provenance {
  std::string source;
  std::vector<std::pair<std::string, std::string>> params;

  Provenance& with(std::string key, std::string value) {
    params.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  Provenance& with(std::string key, double value) {
    return with(std::move(key), format_number(value));
  }

  std::string describe() const {
    std::string out = source;
    if (!params.empty()) {
      out += "(";
      for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) out += ", ";
        out += params[i].first + "=" + params[i].second;
      }
      out += ")";
    }
    return out;
  }
};

/// Largest distance from a point to its nearest distinct neighbour.
/// Rows of `points` are coordinates. Returns 0 for fewer than two points.
template <typename Derived>
typename Derived::Scalar fill_distance(const Eigen::MatrixBase<Derived>& points) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = points.rows();
  if (n < 2) return Scalar(0);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return points(a, 0) < points(b, 0);
  });

  Scalar worst(0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto p = points.row(order[k]);
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (std::size_t j = k + 1; j < order.size(); ++j) {
      const Scalar dx = points(order[j], 0) - p(0);
      if (dx >= best) break;
      const Scalar d = (points.row(order[j]) - p).norm();
      if (d > 0 && d < best) best = d;
    }
    for (std::size_t j = k; j-- > 0;) {
      const Scalar dx = p(0) - points(order[j], 0);
      if (dx >= best) break;
      const Scalar d = (points.row(order[j]) - p).norm();
      if (d > 0 && d < best) best = d;
    }
    if (std::isfinite(best)) worst = std::max(worst, best);
  }
  return worst;
}

/// Finite point set in R^n. Rows are points. Immutable once built.
template <typename Scalar_>
class PointCloud {
 public:
  using Scalar = Scalar_;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  /// Deduplicates (first occurrence wins, order kept) and caches the fill distance.
  PointCloud(const Matrix& points, Provenance descriptor)
      : descriptor_(std::move(descriptor)) {
    detail::require(points.rows() > 0, "points", "cloud must be non-empty");
    detail::require(points.cols() > 0, "ambient_dim", "must be at least 1");
    detail::require(points.allFinite(), "points", "coordinates must be finite");
    points_ = deduplicate(points, removed_);
    resolution_ = fill_distance(points_);
  }

  Eigen::Index size() const { return points_.rows(); }
  int ambient_dim() const { return static_cast<int>(points_.cols()); }
  const Matrix& points() const { return points_; }
  auto point(Eigen::Index i) const { return points_.row(i); }
  const Provenance& descriptor() const { return descriptor_; }
  Scalar resolution() const { return resolution_; }
  Eigen::Index duplicates_removed() const { return removed_; }

  template <typename NewScalar>
  PointCloud<NewScalar> cast() const {
    return PointCloud<NewScalar>(points_.template cast<NewScalar>(), descriptor_);
  }

 private:
  static Matrix deduplicate(const Matrix& in, Eigen::Index& removed) {
    const Eigen::Index n = in.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index(0));
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return in(a, 0) < in(b, 0); });

    std::vector<char> drop(static_cast<std::size_t>(n), 0);
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (drop[order[k]]) continue;
      for (std::size_t j = k + 1; j < order.size(); ++j) {
        if (in(order[j], 0) - in(order[k], 0) > kDedupTolerance) break;
        if (drop[order[j]]) continue;
        if ((in.row(order[j]) - in.row(order[k])).norm() <= kDedupTolerance) {
          // keep whichever came first in the input
          if (order[j] < order[k]) {
            drop[order[k]] = 1;
            break;
          }
          drop[order[j]] = 1;
        }
      }
    }

    removed = std::count(drop.begin(), drop.end(), 1);
    if (removed == 0) return in;
    Matrix out(n - removed, in.cols());
    Eigen::Index row = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (!drop[i]) out.row(row++) = in.row(i);
    return out;
  }

  Matrix points_;
  Provenance descriptor_;
  Scalar resolution_{0};
  Eigen::Index removed_{0};
};

using Cloud = PointCloud<double>;

/// Contracting similarity x -> ratio * rotation * x + translation.
struct SimilarityMap {
  double ratio;
  Eigen::VectorXd translation;
  std::optional<Eigen::MatrixXd> rotation;
};

struct IfsSystem {
  std::vector<SimilarityMap> maps;
  int ambient_dim = 1;

  void validate() const;

  /// Ratios 1/3 with translations 0 and 2/3.
  static IfsSystem middle_third_cantor();
};

/// {0} together with k^-p for k = 1..count.
Cloud generate_sequence_set(double p, std::int64_t count);

/// Cartesian product; rejects results larger than `budget` points.
Cloud product(const Cloud& a, const Cloud& b, std::int64_t budget = kDefaultPointBudget);

/// All depth-fold compositions of the maps applied to the origin.
Cloud generate_ifs_attractor(const IfsSystem& sys, int depth,
                             std::int64_t budget = kDefaultPointBudget);

/// Lower-left corners of the depth-level rectangles of an a x b grid carpet.
Cloud generate_carpet(int base_a, int base_b, const std::vector<std::pair<int, int>>& digits,
                      int depth, std::int64_t budget = kDefaultPointBudget);

/// Uniform grid with `per_axis` points per coordinate on [0,1]^dim.
Cloud generate_uniform_grid(int dim, std::int64_t per_axis,
                            std::int64_t budget = kDefaultPointBudget);

Cloud single_point(int dim = 1);

enum class PointFormat { Csv, Json };

/// Reads a CSV (optional header) or JSON array-of-arrays file.
Cloud load_points(const std::string& path, PointFormat format);
Cloud load_points(const std::string& path);

}  // namespace intdim
