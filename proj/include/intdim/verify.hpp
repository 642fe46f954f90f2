#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "intdim/geometry.hpp"
#include "intdim/profiles.hpp"

namespace intdim {

struct CheckDetail {
  std::string instance;
  double margin = 0.0;  // > 0 means this instance violates its inequality
  std::string note;
};

/// Outcome of one family of inequality checks. pass <=> worst_margin <= 0.
struct CheckReport {
  std::string name;
  int instances = 0;
  double worst_margin = -std::numeric_limits<double>::infinity();
  bool pass = true;
  std::vector<CheckDetail> details;

  void add(std::string instance, double margin, std::string note = {});
  /// Appends another report's instances under a prefix.
  void merge(const CheckReport& other, const std::string& prefix);
};

/// Dyadic slack between covers by arbitrary sets and grid cubes: 4^n.
double dyadic_slack(int ambient_dim);

/// `count` pairs t <= s drawn uniformly from [0, upper], plus the diagonal pair (upper/2, upper/2).
std::vector<std::pair<double, double>> random_exponent_pairs(int count, double upper, std::uint64_t seed);

/// -(s-t) <= (log S^s - log S^t) / -log r <= -theta (s-t) for each pair, on DP cover sums.
/// Rounding is allowed 1e-12 in the quotient.
CheckReport check_sum_lipschitz(const Cloud& cloud, double r, double theta,
                                const std::vector<std::pair<double, double>>& s_pairs,
                                int phases = kDefaultCoverPhases);

/// C^{s,m} >= C^{t,m} >= r^{(s-t)(1-theta)} C^{s,m} for each pair, relative slack 10 tol.
/// Solutions are cross-checked: when another exponent's weights give a lower energy, the solve
/// is repeated from them.
CheckReport check_capacity_lipschitz(const Cloud& cloud, double r, double theta, int m,
                                     const std::vector<std::pair<double, double>>& s_pairs,
                                     const EquilibriumOptions& solver = {});

struct SandwichOptions {
  EquilibriumOptions solver;
  int phases = kDefaultCoverPhases;
  /// Bound on |slope| of log A against log(1/r).
  double max_trend = 0.1;
};

/// Left: S >= r^s C^{s,n} / 4^n at every scale. Right: A(r) = S / (ceil(log2(|E|/r) + 1) r^s C)
/// has least-squares slope within +-max_trend against log(1/r). Every scheduled r is used: both
/// bounds hold for a finite set at any scale, so the schedule is not cut at the scale floor.
CheckReport check_sandwich(const Cloud& cloud, double theta, double s, const ScaleSchedule& sched,
                           const SandwichOptions& opt = {});

struct MonteCarloOptions {
  long trials = 100000;
  /// Trials are doubled up to this count until every standard error is below target_se.
  long max_trials = 1 << 24;
  double target_se = 0.01;
  std::uint64_t seed = 0;
};

/// One Monte Carlo ratio phi(x) / integral at a given |x| and scale.
struct RatioSample {
  double r = 0.0;
  double distance = 0.0;
  double ratio = 0.0;
  double relative_se = 0.0;
  long trials = 0;
};

struct BracketReport {
  CheckReport check;
  std::vector<RatioSample> samples;
  double lower = 0.0;  // bracket from the coarsest scale
  double upper = 0.0;
};

/// Ratio phi^{s,m}_{r,theta}(x) / int phi~^s_{r,theta}(pi_V x) d gamma_{n,m}(V) for every r in
/// r_values. Positions are given on the branch scale |x| = r^(1 - u (1 - theta)): u < 0 is inside
/// r, u in [0,1] the middle branch and u > 1 beyond r^theta. The bracket of the coarsest r, widened
/// by three standard errors, must contain every finer ratio, and every standard error must reach
/// target_se. Requires s < m < n and trials >= 1000.
BracketReport check_kernel_comparison(const std::vector<double>& branch_positions,
                                      const std::vector<double>& r_values, double theta, double s,
                                      int m, int n, const MonteCarloOptions& mc = {});

/// Ratio of int 1{|pi_V x| <= r} d gamma_{n,m}(V) to phi^m_r(x) at |x| = c r for each c in
/// x_over_r, plus the span ends r/10 and 10 r^(1/2), with the same bracket rule. The integral is
/// sampled conditionally on the frame's orthogonal component, which keeps the error bounded
/// relative to the value when the slab is thin. Where a closed form exists the estimate must
/// also match it within exact_tolerance.
BracketReport check_slab_integral(const std::vector<double>& x_over_r,
                                  const std::vector<double>& r_values, int m, int n,
                                  const MonteCarloOptions& mc = {}, double exact_tolerance = 0.02);

/// Closed forms of the slab integral where known: (n,m) = (2,1), (3,1), (3,2). NaN otherwise.
double slab_integral_exact(double distance, double r, int m, int n);

/// Capacity profiles nondecreasing in theta and in m within eta.
CheckReport check_monotonicity(const Cloud& cloud, const std::vector<double>& theta_grid,
                               const std::vector<int>& m_list, const ScaleSchedule& sched,
                               double eta = 0.02, const EstimatorOptions& opt = {});

/// mu(F) r^s / gamma~ <= S^s * 4^n for the Truncated-kernel equilibrium, F the support points
/// with potential at most (1 + tol) gamma~.
CheckReport check_truncated_lower_bound(const Cloud& cloud, double r, double theta, double s,
                                        const EquilibriumOptions& solver = {},
                                        int phases = kDefaultCoverPhases);

/// Named clouds of the canonical suite. The Inequality grade (single point, interval of 1025,
/// Cantor depth 8, F_1 with 1001 points, F_1 x F_1 of 41^2, square grid 33^2) is small enough for
/// full equilibrium solves at every scale. The Estimation grade (single point, interval of 4097,
/// Cantor depth 10, F_1 with 1001 points, F_1 x F_1 of 101^2) leaves several scales above each
/// cloud's floor for profile estimates; a square grid fine enough for that exceeds the solver
/// budget and is left out.
struct NamedCloud {
  std::string name;
  Cloud cloud;
};
enum class SuiteGrade { Inequality, Estimation };
std::vector<NamedCloud> canonical_suite(SuiteGrade grade = SuiteGrade::Inequality);

struct SandwichCase {
  double theta = 0.5;
  double s_fraction = 0.5;  // s = s_fraction * n
};

struct SuiteOptions {
  std::vector<int> r_exponents = {4, 5, 6, 7, 8, 9, 10};
  std::vector<double> thetas = {0.3, 0.7, 1.0};
  int pairs = 10;
  std::uint64_t seed = 0;
  std::vector<SandwichCase> sandwich = {{0.5, 0.5}, {0.7, 0.4}};
  /// Kernel comparison and slab scales.
  std::vector<double> mc_scales = {0x1p-6, 0x1p-8};
  MonteCarloOptions mc;
  std::vector<double> monotonicity_grid = default_theta_grid();
  ScaleSchedule monotonicity_schedule;
  /// Clouds for the monotonicity check; empty selects canonical_suite(SuiteGrade::Estimation).
  std::vector<NamedCloud> estimation_suite;
  double eta = 0.02;
  EquilibriumOptions solver;
};

/// Every check over the suite, one report per check family in the order sum_lipschitz,
/// capacity_lipschitz, sandwich, kernel_comparison, slab_integral, monotonicity,
/// truncated_lower_bound.
std::vector<CheckReport> run_verification(const std::vector<NamedCloud>& suite,
                                          const SuiteOptions& opt = {});

}  // namespace intdim
