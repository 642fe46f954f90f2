#include "intdim/projections.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "intdim/errors.hpp"
#include "intdim/parallel.hpp"

namespace intdim {

namespace {

constexpr int kMaxRedraws = 100;
constexpr double kDegenerateNorm = 1e-6;

}  // namespace

double SubspaceFrame::orthonormality_error() const {
  const Eigen::MatrixXd g = basis * basis.transpose();
  return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

SubspaceFrame sample_subspace(int n, int m, std::uint64_t seed) {
  detail::require(n >= 2, "n", "must be at least 2");
  detail::require(m >= 1 && m < n, "m", "must satisfy 1 <= m < n");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;

  SubspaceFrame frame;
  frame.seed = seed;
  frame.basis.resize(m, n);
  for (int i = 0; i < m; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxRedraws && !placed; ++attempt) {
      Eigen::RowVectorXd v(n);
      for (int c = 0; c < n; ++c) v(c) = normal(rng);
      const double raw = v.norm();
      // two Gram-Schmidt passes keep the frame orthonormal to rounding
      for (int pass = 0; pass < 2; ++pass)
        for (int j = 0; j < i; ++j) v -= v.dot(frame.basis.row(j)) * frame.basis.row(j);
      const double norm = v.norm();
      if (!(norm > kDegenerateNorm * raw)) continue;
      v /= norm;
      for (int c = 0; c < n; ++c) {
        if (v(c) != 0.0) {
          if (v(c) < 0.0) v = -v;
          break;
        }
      }
      frame.basis.row(i) = v;
      placed = true;
    }
    if (!placed) throw Error("sample_subspace: degenerate draws after " + std::to_string(kMaxRedraws) + " retries");
  }
  return frame;
}

SubspaceFrame axis_frame(int n, const std::vector<int>& axes) {
  detail::require(!axes.empty() && static_cast<int>(axes.size()) <= n, "axes", "need 1..n axes");
  SubspaceFrame frame;
  frame.basis = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(axes.size()), n);
  for (std::size_t i = 0; i < axes.size(); ++i) {
    detail::require(axes[i] >= 0 && axes[i] < n, "axes", "axis index out of range");
    frame.basis(static_cast<Eigen::Index>(i), axes[i]) = 1.0;
  }
  detail::require(frame.orthonormality_error() == 0.0, "axes", "must be distinct");
  return frame;
}

Cloud project(const Cloud& cloud, const SubspaceFrame& frame) {
  detail::require(frame.ambient_dim() == cloud.ambient_dim(), "frame",
                  "ambient dimension does not match the cloud");
  const Cloud::Matrix projected = cloud.points() * frame.basis.transpose();
  Provenance desc = cloud.descriptor();
  desc.with("projected_seed", std::to_string(frame.seed)).with("projected_dim", frame.dim());
  return Cloud(projected, desc);
}

double quantile(std::vector<double> values, double q) {
  detail::require(!values.empty(), "values", "must be non-empty");
  detail::require(q >= 0.0 && q <= 1.0, "q", "must lie in [0,1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

ProjectionReport projection_experiment(const Cloud& cloud, int m, const ProjectionOptions& opt) {
  const int n = cloud.ambient_dim();
  detail::require(m >= 1 && m < n, "m", "must satisfy 1 <= m < n");
  detail::require(opt.trials >= 0, "trials", "must be nonnegative");
  detail::require(opt.trials + static_cast<int>(opt.exceptional.size()) > 0, "trials",
                  "need at least one frame");
  detail::require(opt.eta >= 0.0, "eta", "must be nonnegative");
  for (const auto& f : opt.exceptional)
    detail::require(f.ambient_dim() == n && f.dim() == m, "exceptional", "frame shape must be m x n");

  ProjectionReport rep;
  rep.m = m;
  rep.eta = opt.eta;
  for (int t = 0; t < opt.trials; ++t) {
    rep.frames.push_back(sample_subspace(n, m, opt.seed + static_cast<std::uint64_t>(t)));
    rep.is_exceptional.push_back(0);
  }
  for (const auto& f : opt.exceptional) {
    rep.frames.push_back(f);
    rep.is_exceptional.push_back(1);
  }

  rep.profile = profile_curve(cloud, m, opt.theta_grid, opt.schedule, opt.estimator);
  rep.estimates.assign(rep.frames.size(), {});
  parallel_for(rep.frames.size(), [&](std::size_t i) {
    const Cloud shadow = project(cloud, rep.frames[i]);
    rep.estimates[i] = cover_curve(shadow, opt.theta_grid, opt.schedule, opt.estimator).estimates;
  });

  for (std::size_t i = 0; i < rep.frames.size(); ++i)
    for (std::size_t k = 0; k < opt.theta_grid.size(); ++k)
      if (rep.estimates[i][k] > rep.profile.estimates[k] + opt.eta) ++rep.exceed_count;

  for (std::size_t k = 0; k < opt.theta_grid.size(); ++k) {
    std::vector<double> generic;
    for (std::size_t i = 0; i < rep.frames.size(); ++i)
      if (!rep.is_exceptional[i]) generic.push_back(rep.estimates[i][k]);
    if (generic.empty()) {
      rep.median.push_back(std::nan(""));
      rep.iqr.push_back(std::nan(""));
      continue;
    }
    rep.median.push_back(quantile(generic, 0.5));
    rep.iqr.push_back(quantile(generic, 0.75) - quantile(generic, 0.25));
  }
  return rep;
}

}  // namespace intdim
