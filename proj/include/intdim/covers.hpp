#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "intdim/geometry.hpp"

namespace intdim {

/// One chosen cube: lower corner, side unit * 2^-level.
struct CoverCell {
  Eigen::VectorXd corner;
  double side = 0.0;
  int level = 0;
};

struct CoverSumResult {
  double value = 0.0;
  std::vector<CoverCell> cells;
  std::map<int, std::int64_t> scale_histogram;  // level -> chosen cells
  double r = 0.0;
  double theta = 1.0;
  double s = 0.0;
  double r_eff = 0.0;      // smallest admitted diameter
  double upper_eff = 0.0;  // largest admitted diameter
  double unit = 1.0;       // cube sides are unit * 2^-level
};

/// Levels whose cube diameters unit * 2^-j sqrt(n) fall in [r, r^theta], or the single
/// nearest level when none do (ties go to the coarser level).
struct AdmittedLevels {
  int coarsest = 0;
  int finest = 0;
  bool exact = true;
};

AdmittedLevels admitted_levels(int ambient_dim, double r, double theta, double unit = 1.0);

/// Occupied cubes of side unit * 2^-j (grid anchored at the origin) at every admitted level,
/// built once per (r, theta) and reused for any exponent s.
class CoverHierarchy {
 public:
  CoverHierarchy(const Cloud& cloud, double r, double theta, double unit = 1.0);

  double value(double s) const;
  CoverSumResult evaluate(double s, bool record_cells = true) const;

  const AdmittedLevels& levels() const { return levels_; }
  double diameter(int level) const;
  std::int64_t occupied(int level) const;

 private:
  struct Level {
    int j = 0;
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> keys;
    std::vector<std::int64_t> parent;  // index into the next coarser level
  };

  int n_ = 1;
  double r_ = 0.0;
  double theta_ = 1.0;
  double unit_ = 1.0;
  AdmittedLevels levels_;
  std::vector<Level> by_level_;  // finest first
};

/// Number of grid phases used by default: cube families of side 2^(-i/4) * 2^-j, i = 0..3.
inline constexpr int kDefaultCoverPhases = 4;

/// Minimum over several nested cube families, each with its own exact DP. Family i has cube
/// sides 2^(-i/phases) * 2^-j, so the admitted band edges are resolved to 1/phases of an octave.
/// Families with no level inside the band are skipped unless none has one, in which case the
/// plain dyadic family's nearest level is used.
class CoverSum {
 public:
  CoverSum(const Cloud& cloud, double r, double theta, int phases = kDefaultCoverPhases);

  double value(double s) const;
  CoverSumResult evaluate(double s, bool record_cells = true) const;
  const std::vector<CoverHierarchy>& families() const { return families_; }

 private:
  std::vector<CoverHierarchy> families_;
};

/// Minimum of sum diam^s over grid-cube covers with admitted diameters; phases = 1 restricts
/// to the dyadic family.
CoverSumResult restricted_cover_sum(const Cloud& cloud, double r, double theta, double s,
                                    int phases = kDefaultCoverPhases);

/// Number of origin-anchored grid cells of side delta meeting the cloud.
std::int64_t box_count(const Cloud& cloud, double delta);

}  // namespace intdim
