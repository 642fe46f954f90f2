#include "intdim/equilibrium.hpp"

#include <cmath>
#include <map>
#include <numeric>

namespace intdim {

std::vector<Eigen::Index> net_indices(const Cloud::Matrix& points, double h) {
  const double inv = std::sqrt(static_cast<double>(points.cols())) / h;
  std::vector<std::pair<std::vector<std::int64_t>, Eigen::Index>> cells;
  cells.reserve(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    std::vector<std::int64_t> key(static_cast<std::size_t>(points.cols()));
    for (Eigen::Index c = 0; c < points.cols(); ++c)
      key[static_cast<std::size_t>(c)] = static_cast<std::int64_t>(std::floor(points(i, c) * inv));
    cells.emplace_back(std::move(key), i);
  }
  std::sort(cells.begin(), cells.end());
  std::vector<Eigen::Index> out;
  for (std::size_t k = 0; k < cells.size(); ++k)
    if (k == 0 || cells[k].first != cells[k - 1].first) out.push_back(cells[k].second);
  std::sort(out.begin(), out.end());
  return out;
}

EquilibriumResult capacity(const Cloud& cloud, const KernelSpec& spec,
                           const EquilibriumOptions& opt, Eigen::Index cap) {
  spec.validate(cloud.ambient_dim());
  opt.validate();
  const Eigen::Index n = cloud.size();
  if (n > cap) {
    throw BudgetError("capacity of " + std::to_string(n) + " points exceeds the cap of " +
                      std::to_string(cap));
  }

  // One coarse pass on the r/2 net seeds the full solve when that net is small enough to help.
  std::vector<std::vector<Eigen::Index>> levels;
  if (!opt.warm_start) {
    auto idx = net_indices(cloud.points(), spec.r / 2.0);
    if (2 * static_cast<Eigen::Index>(idx.size()) < n) levels.push_back(std::move(idx));
  }

  Eigen::VectorXd full_weights;
  if (!levels.empty()) {
    EquilibriumOptions coarse = opt;
    coarse.tol = std::max(opt.tol, 1e-6);
    Eigen::VectorXd weights;
    for (std::size_t l = 0; l < levels.size(); ++l) {
      const auto& idx = levels[l];
      Cloud::Matrix sub(static_cast<Eigen::Index>(idx.size()), cloud.ambient_dim());
      for (std::size_t k = 0; k < idx.size(); ++k) sub.row(static_cast<Eigen::Index>(k)) = cloud.point(idx[k]);
      if (l > 0) {
        // nets are nested, so every previous representative reappears in this level
        Eigen::VectorXd start = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(idx.size()));
        const auto& prev = levels[l - 1];
        for (std::size_t a = 0, b = 0; a < prev.size(); ++a) {
          while (idx[b] != prev[a]) ++b;
          start(static_cast<Eigen::Index>(b)) = weights(static_cast<Eigen::Index>(a));
        }
        coarse.warm_start = std::move(start);
      }
      ImplicitGram op(sub, spec);
      try {
        weights = minimize_energy_op(op, coarse).weights;
      } catch (const SolverError&) {
        weights.resize(0);
        break;
      }
    }
    if (weights.size() > 0) {
      full_weights = Eigen::VectorXd::Zero(n);
      for (std::size_t k = 0; k < levels.back().size(); ++k)
        full_weights(levels.back()[k]) = weights(static_cast<Eigen::Index>(k));
    }
  }

  ImplicitGram op(cloud, spec);
  if (full_weights.size() == n) {
    EquilibriumOptions fine = opt;
    fine.warm_start = std::move(full_weights);
    return minimize_energy_op(op, fine);
  }
  return minimize_energy_op(op, opt);
}

double mean_annulus_multiplicity(const Cloud& cloud, const EquilibriumResult& eq,
                                 const KernelSpec& spec) {
  const KernelEvaluator<double> kernel(spec);
  const auto support = eq.support();
  if (support.size() < 2) return 1.0;

  double total_weight = 0.0;
  double mean = 0.0;
  std::vector<double> shells;
  for (auto i : support) {
    shells.assign(4, 0.0);
    double potential = 0.0;
    for (auto j : support) {
      const double d = (cloud.point(i) - cloud.point(j)).norm();
      const double share = eq.weights(j) * kernel(d);
      std::size_t k = 0;
      if (d >= spec.r) k = static_cast<std::size_t>(std::floor(std::log2(d / spec.r))) + 1;
      if (k >= shells.size()) shells.resize(k + 1, 0.0);
      shells[k] += share;
      potential += share;
    }
    const double peak = *std::max_element(shells.begin(), shells.end());
    mean += eq.weights(i) * (potential / peak);
    total_weight += eq.weights(i);
  }
  return mean / total_weight;
}

}  // namespace intdim
