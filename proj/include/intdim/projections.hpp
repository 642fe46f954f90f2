#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "intdim/geometry.hpp"
#include "intdim/profiles.hpp"

namespace intdim {

/// m orthonormal rows spanning a subspace of R^n.
struct SubspaceFrame {
  Eigen::MatrixXd basis;  // m x n
  std::uint64_t seed = 0;

  int ambient_dim() const { return static_cast<int>(basis.cols()); }
  int dim() const { return static_cast<int>(basis.rows()); }
  /// Largest |<b_i, b_j> - delta_ij|.
  double orthonormality_error() const;
};

/// Rotation-invariant random m-frame: m standard normal n-vectors, Gram-Schmidt, then each
/// vector's first nonzero component made positive. Deterministic in the seed.
SubspaceFrame sample_subspace(int n, int m, std::uint64_t seed);

/// Frame spanned by the listed coordinate axes.
SubspaceFrame axis_frame(int n, const std::vector<int>& axes);

/// Coordinates <x, b_j> of every point; duplicates created by the projection are removed.
Cloud project(const Cloud& cloud, const SubspaceFrame& frame);

struct ProjectionOptions {
  int trials = 20;
  std::uint64_t seed = 0;
  std::vector<double> theta_grid = {1.0};
  /// Slack on the sure bound estimate(pi_V E) <= profile + eta.
  double eta = 0.07;
  /// Known exceptional frames, estimated and reported but kept out of the spread statistics.
  std::vector<SubspaceFrame> exceptional;
  ScaleSchedule schedule;
  EstimatorOptions estimator;
};

struct ProjectionReport {
  int m = 1;
  std::vector<SubspaceFrame> frames;   // random frames first, then the exceptional ones
  std::vector<char> is_exceptional;    // per frame
  std::vector<std::vector<double>> estimates;  // [frame][theta]
  DimensionProfile profile;            // capacity profile of the unprojected cloud
  double eta = 0.07;
  int exceed_count = 0;                // (frame, theta) with estimate > profile + eta
  std::vector<double> median;          // per theta, random frames only
  std::vector<double> iqr;             // per theta, random frames only
};

/// Estimates dim_theta of pi_V E for `trials` random frames (seeds seed, seed+1, ...) and the
/// exceptional frames, alongside the m-profile of E.
ProjectionReport projection_experiment(const Cloud& cloud, int m, const ProjectionOptions& opt);

/// Linear-interpolated quantile of a sample, q in [0,1].
double quantile(std::vector<double> values, double q);

}  // namespace intdim
