#include "intdim/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>

#include "intdim/covers.hpp"
#include "intdim/errors.hpp"
#include "intdim/format.hpp"
#include "intdim/parallel.hpp"

namespace intdim {

const char* to_string(Quotient q) {
  switch (q) {
    case Quotient::Ratio: return "ratio";
    case Quotient::Anchored: return "anchored";
    case Quotient::Regression: return "regression";
  }
  return "?";
}

std::vector<double> dyadic_scales(int k_first, int k_last) {
  detail::require(k_first >= 1 && k_last >= k_first, "r_values", "need 1 <= k_first <= k_last");
  std::vector<double> out;
  for (int k = k_first; k <= k_last; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

ScaleSchedule ScaleSchedule::dyadic(int k_first, int k_last, int tail_window, LimitMode mode) {
  ScaleSchedule out;
  out.r_values = dyadic_scales(k_first, k_last);
  out.tail_window = tail_window;
  out.mode = mode;
  return out;
}

void ScaleSchedule::validate() const {
  detail::require(!r_values.empty(), "r_values", "must be non-empty");
  for (std::size_t i = 0; i < r_values.size(); ++i) {
    detail::require(r_values[i] > 0.0 && r_values[i] < 1.0, "r_values", "must lie in (0,1)");
    detail::require(i == 0 || r_values[i] < r_values[i - 1], "r_values", "must be strictly decreasing");
  }
  detail::require(tail_window >= 0, "tail_window", "must be nonnegative");
  detail::require(static_cast<std::size_t>(tail_window) <= r_values.size(), "tail_window",
                  "must not exceed the number of scales");
}

std::vector<double> ScaleSchedule::tail() const {
  validate();
  if (tail_window == 0) return r_values;
  return {r_values.end() - tail_window, r_values.end()};
}

namespace {

double joint_floor(const Cloud& cloud) {
  const auto target = std::max<std::int64_t>(2, (cloud.size() + 3) / 4);
  if (cloud.size() < 2) return 0.0;
  for (int j = 0; j <= 60; ++j) {
    const double delta = std::ldexp(1.0, -j);
    if (box_count(cloud, delta) >= target) return delta;
  }
  return 0.0;
}

}  // namespace

double scale_floor(const Cloud& cloud) {
  double floor = joint_floor(cloud);
  if (cloud.ambient_dim() > 1) {
    for (int c = 0; c < cloud.ambient_dim(); ++c) {
      Cloud marginal(cloud.points().col(c), Provenance{"marginal", {}});
      floor = std::max(floor, joint_floor(marginal));
    }
  }
  return floor;
}

ScaleSchedule bind_schedule(const ScaleSchedule& sched, const Cloud& cloud) {
  sched.validate();
  const double floor = scale_floor(cloud);
  ScaleSchedule out = sched;
  out.r_values.clear();
  for (double r : sched.r_values)
    if (r >= floor) out.r_values.push_back(r);
  const auto needed = static_cast<std::size_t>(std::max(sched.tail_window, 2));
  detail::require(out.r_values.size() >= needed, "r_values",
                  "fewer than " + std::to_string(needed) + " scales lie above the cloud's scale floor " +
                      format_number(floor));
  return out;
}

void EstimatorOptions::validate() const {
  detail::require(tol_s > 0.0 && tol_s < 1.0, "tol_s", "must lie in (0,1)");
  detail::require(anchor_r >= 0.0 && anchor_r < 1.0, "anchor_r", "must lie in [0,1)");
  detail::require(net_factor == 0.0 || net_factor >= 1.0, "net_factor", "must be 0 or at least 1");
  detail::require(cover_phases >= 1, "cover_phases", "must be at least 1");
  solver.validate();
}

namespace {

// Scales a bisection needs: the tail, plus the anchor in front for Quotient::Anchored.
struct ScalePlan {
  std::vector<double> scales;
  std::size_t first_tail = 0;
};

ScalePlan plan_scales(const ScaleSchedule& bound, const EstimatorOptions& opt) {
  ScalePlan plan;
  const auto tail = bound.tail();
  if (opt.quotient == Quotient::Anchored) {
    const double anchor = opt.anchor_r > 0.0 ? opt.anchor_r : bound.r_values.front();
    detail::require(anchor > tail.front(), "anchor_r", "must be coarser than every tail scale");
    plan.scales.push_back(anchor);
    plan.first_tail = 1;
  }
  plan.scales.insert(plan.scales.end(), tail.begin(), tail.end());
  return plan;
}

// Per-scale quotients from the log-values at plan.scales, paired with the scale they belong to.
std::vector<std::pair<double, double>> quotients(const ScalePlan& plan, const std::vector<double>& logs,
                                                 Quotient kind) {
  std::vector<std::pair<double, double>> out;
  const auto& r = plan.scales;
  switch (kind) {
    case Quotient::Ratio:
      for (std::size_t i = plan.first_tail; i < r.size(); ++i) out.emplace_back(r[i], logs[i] / -std::log(r[i]));
      break;
    case Quotient::Anchored:
      for (std::size_t i = plan.first_tail; i < r.size(); ++i)
        out.emplace_back(r[i], (logs[i] - logs[0]) / std::log(r[0] / r[i]));
      break;
    case Quotient::Regression: {
      if (r.size() == 1) {
        out.emplace_back(r[0], logs[0] / -std::log(r[0]));
        break;
      }
      double mx = 0.0, my = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) {
        mx += -std::log(r[i]);
        my += logs[i];
      }
      mx /= static_cast<double>(r.size());
      my /= static_cast<double>(r.size());
      double sxy = 0.0, sxx = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) {
        const double dx = -std::log(r[i]) - mx;
        sxy += dx * (logs[i] - my);
        sxx += dx * dx;
      }
      out.emplace_back(r.back(), sxy / sxx);
      break;
    }
  }
  return out;
}

// Bisection for a strictly decreasing F on [0, upper]; log_values(s) gives L at every planned scale.
FixedPointResult bisect(double theta, double upper, bool subtract_s, const ScalePlan& plan,
                        const EstimatorOptions& opt, LimitMode mode,
                        const std::function<std::vector<double>(double)>& log_values) {
  FixedPointResult res;
  auto f = [&](double s) {
    const auto q = quotients(plan, log_values(s), opt.quotient);
    double a = q.front().second;
    for (const auto& [r, v] : q) {
      res.diagnostics.push_back({theta, s, r, v});
      a = mode == LimitMode::Lower ? std::min(a, v) : std::max(a, v);
    }
    return subtract_s ? a - s : a;
  };

  const double f_lo = f(0.0);
  if (f_lo <= 0.0) {
    res.estimate = 0.0;
    res.residual = f_lo;
    res.clamped = f_lo < 0.0;
    return res;
  }
  const double f_hi = f(upper);
  if (f_hi >= 0.0) {
    res.estimate = upper;
    res.residual = f_hi;
    res.clamped = f_hi > 0.0;
    return res;
  }
  double lo = 0.0, hi = upper;
  while (hi - lo > opt.tol_s) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  res.estimate = 0.5 * (lo + hi);
  res.residual = f(res.estimate);
  return res;
}

// Capacities at one scale, memoised by s and warm-started from the nearest solved s.
class CapacityScale {
 public:
  CapacityScale(const Cloud& cloud, double r, double theta, int m, const EstimatorOptions& opt)
      : opt_(opt) {
    spec_.r = r;
    spec_.theta = theta;
    spec_.m = m;
    spec_.variant = KernelVariant::Full;
    if (opt.net_factor > 0.0) {
      const auto idx = net_indices(cloud.points(), r / opt.net_factor);
      if (static_cast<Eigen::Index>(idx.size()) < cloud.size()) {
        Cloud::Matrix sub(static_cast<Eigen::Index>(idx.size()), cloud.ambient_dim());
        for (std::size_t k = 0; k < idx.size(); ++k) sub.row(static_cast<Eigen::Index>(k)) = cloud.point(idx[k]);
        Provenance desc = cloud.descriptor();
        net_ = std::make_unique<Cloud>(sub, desc.with("net", r / opt.net_factor));
      }
    }
    if (!net_) net_ = std::make_unique<Cloud>(cloud);
  }

  double log_value(double s) {
    // with theta = 1 the kernel does not depend on s
    const double key = spec_.theta == 1.0 ? 0.0 : s;
    auto hit = memo_.find(key);
    if (hit != memo_.end()) return hit->second.log_value;

    KernelSpec spec = spec_;
    spec.s = s;
    EquilibriumOptions eo = opt_.solver;
    if (!memo_.empty()) {
      auto near = memo_.lower_bound(key);
      if (near == memo_.end() || (near != memo_.begin() && key - std::prev(near)->first < near->first - key))
        near = std::prev(near);
      eo.warm_start = near->second.weights;
    }
    const auto eq = capacity(*net_, spec, eo);
    ++solves_;
    max_gap_ = std::max({max_gap_, eq.kkt_gap, eq.support_gap});
    double value = std::log(eq.capacity);
    if (opt_.annulus_correction) value += std::log(mean_annulus_multiplicity(*net_, eq, spec));
    memo_.emplace(key, Entry{value, eq.weights});
    return value;
  }

  long solves() const { return solves_; }
  double max_gap() const { return max_gap_; }

 private:
  struct Entry {
    double log_value;
    Eigen::VectorXd weights;
  };

  const EstimatorOptions& opt_;
  KernelSpec spec_;
  std::unique_ptr<Cloud> net_;
  std::map<double, Entry> memo_;
  long solves_ = 0;
  double max_gap_ = 0.0;
};

}  // namespace

FixedPointResult capacity_fixed_point(const Cloud& cloud, double theta, int m,
                                      const ScaleSchedule& sched, const EstimatorOptions& opt) {
  detail::require(theta > 0.0 && theta <= 1.0, "theta", "must lie in (0,1]");
  detail::require(m >= 1 && m <= cloud.ambient_dim(), "m", "must lie in 1..n");
  opt.validate();
  const auto bound = bind_schedule(sched, cloud);
  const auto plan = plan_scales(bound, opt);

  std::vector<std::unique_ptr<CapacityScale>> scales(plan.scales.size());
  parallel_for(scales.size(), [&](std::size_t i) {
    scales[i] = std::make_unique<CapacityScale>(cloud, plan.scales[i], theta, m, opt);
  });
  auto res = bisect(theta, m, true, plan, opt, bound.mode, [&](double s) {
    std::vector<double> logs(scales.size());
    parallel_for(scales.size(), [&](std::size_t i) { logs[i] = scales[i]->log_value(s); });
    return logs;
  });
  for (const auto& sc : scales) {
    res.solves += sc->solves();
    res.max_kkt_gap = std::max(res.max_kkt_gap, sc->max_gap());
  }
  return res;
}

FixedPointResult cover_fixed_point(const Cloud& cloud, double theta, const ScaleSchedule& sched,
                                   const EstimatorOptions& opt) {
  detail::require(theta > 0.0 && theta <= 1.0, "theta", "must lie in (0,1]");
  opt.validate();
  const auto bound = bind_schedule(sched, cloud);
  const auto plan = plan_scales(bound, opt);

  std::vector<std::unique_ptr<CoverSum>> hier(plan.scales.size());
  parallel_for(hier.size(), [&](std::size_t i) {
    hier[i] = std::make_unique<CoverSum>(cloud, plan.scales[i], theta, opt.cover_phases);
  });
  return bisect(theta, cloud.ambient_dim(), false, plan, opt, bound.mode, [&](double s) {
    std::vector<double> logs(hier.size());
    for (std::size_t i = 0; i < hier.size(); ++i) logs[i] = std::log(hier[i]->value(s));
    return logs;
  });
}

double intermediate_dimension(const Cloud& cloud, double theta, const ScaleSchedule& sched,
                              LimitMode mode, const EstimatorOptions& opt) {
  ScaleSchedule routed = sched;
  routed.mode = mode;
  return cover_fixed_point(cloud, theta, routed, opt).estimate;
}

double DimensionProfile::worst_decrease() const {
  double worst = 0.0;
  double running_max = -std::numeric_limits<double>::infinity();
  for (double e : estimates) {
    worst = std::max(worst, running_max - e);
    running_max = std::max(running_max, e);
  }
  return worst;
}

std::vector<double> default_theta_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 10; ++i) grid.push_back(i / 10.0);
  return grid;
}

namespace {

DimensionProfile run_curve(ProfileSource source, int m, const std::vector<double>& grid,
                           const ScaleSchedule& sched,
                           const std::function<FixedPointResult(double)>& solve) {
  detail::require(!grid.empty(), "theta_grid", "must be non-empty");
  for (double t : grid) detail::require(t > 0.0 && t <= 1.0, "theta", "must lie in (0,1]");
  DimensionProfile prof;
  prof.m = m;
  prof.source = source;
  prof.mode = sched.mode;
  prof.theta_grid = grid;
  std::vector<FixedPointResult> points(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { points[i] = solve(grid[i]); });
  for (auto& p : points) {
    prof.estimates.push_back(p.estimate);
    prof.residuals.push_back(p.residual);
    prof.clamped.push_back(p.clamped);
    prof.max_kkt_gap = std::max(prof.max_kkt_gap, p.max_kkt_gap);
    prof.diagnostics.insert(prof.diagnostics.end(), p.diagnostics.begin(), p.diagnostics.end());
  }
  return prof;
}

}  // namespace

DimensionProfile profile_curve(const Cloud& cloud, int m, const std::vector<double>& theta_grid,
                               const ScaleSchedule& sched, const EstimatorOptions& opt) {
  return run_curve(ProfileSource::Capacity, m, theta_grid, sched,
                   [&](double t) { return capacity_fixed_point(cloud, t, m, sched, opt); });
}

DimensionProfile cover_curve(const Cloud& cloud, const std::vector<double>& theta_grid,
                             const ScaleSchedule& sched, const EstimatorOptions& opt) {
  return run_curve(ProfileSource::Cover, cloud.ambient_dim(), theta_grid, sched,
                   [&](double t) { return cover_fixed_point(cloud, t, sched, opt); });
}

}  // namespace intdim
