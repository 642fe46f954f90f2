#pragma once

#include <string>
#include <vector>

#include "intdim/covers.hpp"
#include "intdim/equilibrium.hpp"
#include "intdim/geometry.hpp"

namespace intdim {

enum class LimitMode { Lower, Upper };

inline const char* to_string(LimitMode mode) { return mode == LimitMode::Lower ? "lower" : "upper"; }

/// How one scale's log-value L(r) becomes a dimension quotient.
enum class Quotient {
  Ratio,       // L(r) / -log r
  Anchored,    // (L(r) - L(r_a)) / log(r_a / r), r_a the anchor scale
  Regression,  // least-squares slope of L against -log r over the tail (mode has no effect)
};

const char* to_string(Quotient q);

/// 2^-k for k = k_first..k_last.
std::vector<double> dyadic_scales(int k_first, int k_last);

/// Decreasing scales in (0,1); the last tail_window of them (all when 0) stand in for r -> 0.
/// The default runs from 2^-5 down to 2^-40 and is cut at the cloud's floor when bound.
struct ScaleSchedule {
  std::vector<double> r_values = dyadic_scales(5, 40);
  int tail_window = 0;
  LimitMode mode = LimitMode::Lower;

  /// r_k = 2^-k for k = k_first..k_last.
  static ScaleSchedule dyadic(int k_first, int k_last, int tail_window = 0,
                              LimitMode mode = LimitMode::Lower);

  void validate() const;
  std::vector<double> tail() const;
};

/// Smallest scale at which the cloud still looks like a set rather than a sample: the largest
/// dyadic delta whose box count reaches a quarter of the points, taken as the coarsest such
/// delta over the cloud and each of its coordinate marginals. 0 for a single point.
double scale_floor(const Cloud& cloud);

/// Drops scales below the cloud's floor. Throws ValidationError("r_values") if fewer than
/// tail_window remain.
ScaleSchedule bind_schedule(const ScaleSchedule& sched, const Cloud& cloud);

struct EstimatorOptions {
  double tol_s = 1e-3;
  Quotient quotient = Quotient::Regression;
  /// Anchor scale for Quotient::Anchored; 0 picks the coarsest scheduled scale.
  double anchor_r = 0.0;
  /// Multiply capacities by the mean annulus multiplicity of their equilibrium measure.
  bool annulus_correction = true;
  /// Capacities at scale r are solved on an r / net_factor net of the cloud; 0 uses every point.
  double net_factor = 8.0;
  /// Grid families for cover sums (see CoverSum).
  int cover_phases = kDefaultCoverPhases;
  EquilibriumOptions solver;

  void validate() const;
};

/// One per-scale quotient visited during a bisection.
struct QuotientSample {
  double theta = 1.0;
  double s = 0.0;
  double r = 0.0;
  double quotient = 0.0;
};

struct FixedPointResult {
  double estimate = 0.0;
  /// Value of the bisected function at the estimate.
  double residual = 0.0;
  /// The root fell outside the admissible interval and was clamped to its end.
  bool clamped = false;
  std::vector<QuotientSample> diagnostics;
  /// Largest certificate gap over every capacity solve (0 for cover sums).
  double max_kkt_gap = 0.0;
  long solves = 0;
};

/// Root s in [0,m] of A_tail[q_r(log C^{s,m}_{r,theta})] - s.
FixedPointResult capacity_fixed_point(const Cloud& cloud, double theta, int m,
                                      const ScaleSchedule& sched,
                                      const EstimatorOptions& opt = {});

/// Root s in [0,n] of A_tail[q_r(log S^s_{r,theta})].
FixedPointResult cover_fixed_point(const Cloud& cloud, double theta, const ScaleSchedule& sched,
                                   const EstimatorOptions& opt = {});

/// Lower or upper intermediate dimension: cover_fixed_point with the mode set on the schedule.
double intermediate_dimension(const Cloud& cloud, double theta, const ScaleSchedule& sched,
                              LimitMode mode, const EstimatorOptions& opt = {});

enum class ProfileSource { Capacity, Cover };

struct DimensionProfile {
  int m = 1;
  ProfileSource source = ProfileSource::Capacity;
  LimitMode mode = LimitMode::Lower;
  std::vector<double> theta_grid;
  std::vector<double> estimates;
  std::vector<double> residuals;
  std::vector<char> clamped;
  std::vector<QuotientSample> diagnostics;
  double max_kkt_gap = 0.0;

  /// Largest drop estimates[i] - estimates[j] over i < j; the profile is monotone within eta
  /// when this is at most eta.
  double worst_decrease() const;
};

/// {0.1, 0.2, ..., 1.0}
std::vector<double> default_theta_grid();

/// Capacity profile theta -> dim^m_theta over the grid.
DimensionProfile profile_curve(const Cloud& cloud, int m, const std::vector<double>& theta_grid,
                               const ScaleSchedule& sched, const EstimatorOptions& opt = {});

/// Cover-sum profile theta -> dim_theta over the grid (m is the ambient dimension).
DimensionProfile cover_curve(const Cloud& cloud, const std::vector<double>& theta_grid,
                             const ScaleSchedule& sched, const EstimatorOptions& opt = {});

}  // namespace intdim
