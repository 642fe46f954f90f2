#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "intdim/errors.hpp"
#include "intdim/geometry.hpp"
#include "intdim/kernels.hpp"

namespace intdim {

struct EquilibriumOptions {
  double tol = 1e-8;
  long max_iters = 200000;
  double support_tolerance = 1e-10;
  int restarts = 3;
  std::uint64_t seed = 0;
  std::optional<Eigen::VectorXd> warm_start;

  void validate() const {
    detail::require(tol > 0.0, "tol", "must be positive");
    detail::require(max_iters > 0, "max_iters", "must be positive");
    detail::require(support_tolerance >= 0.0, "support_tolerance", "must be nonnegative");
    detail::require(restarts >= 0, "restarts", "must be nonnegative");
  }
};

struct EquilibriumResult {
  Eigen::VectorXd weights;
  double energy = 1.0;
  double capacity = 1.0;
  Eigen::VectorXd potentials;
  /// max(energy - min potential, 0) / energy
  double kkt_gap = 0.0;
  /// max over support of (potential - energy) / energy, floored at 0
  double support_gap = 0.0;
  double support_tolerance = 1e-10;
  long iterations = 0;
  int attempts = 1;

  std::vector<Eigen::Index> support() const {
    std::vector<Eigen::Index> out;
    for (Eigen::Index i = 0; i < weights.size(); ++i)
      if (weights(i) > support_tolerance) out.push_back(i);
    return out;
  }
};

/// Gram operator over an explicit matrix.
class DenseGram {
 public:
  explicit DenseGram(const Eigen::MatrixXd& g) : g_(g) {
    detail::require(g.rows() == g.cols(), "gram", "must be square");
    detail::require(g.rows() > 0, "gram", "must be non-empty");
  }
  Eigen::Index size() const { return g_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return g_(i, j); }
  Eigen::Ref<const Eigen::VectorXd> column(Eigen::Index j) { return g_.col(j); }
  void trim(const std::vector<Eigen::Index>&) {}

 private:
  const Eigen::MatrixXd& g_;
};

/// Gram operator evaluated from the cloud on demand; columns are cached until trimmed.
class ImplicitGram {
 public:
  ImplicitGram(const Cloud::Matrix& points, const KernelSpec& spec, std::size_t max_cached = 4096)
      : pts_(points), kernel_(spec), max_cached_(max_cached) {}
  ImplicitGram(const Cloud& cloud, const KernelSpec& spec, std::size_t max_cached = 4096)
      : ImplicitGram(cloud.points(), spec, max_cached) {}

  Eigen::Index size() const { return pts_.rows(); }

  double operator()(Eigen::Index i, Eigen::Index j) const {
    if (i == j) return 1.0;
    if (auto it = cache_.find(j); it != cache_.end()) return it->second(i);
    if (auto it = cache_.find(i); it != cache_.end()) return it->second(j);
    return kernel_((pts_.row(i) - pts_.row(j)).norm());
  }

  Eigen::Ref<const Eigen::VectorXd> column(Eigen::Index j) {
    auto it = cache_.find(j);
    if (it != cache_.end()) return it->second;
    Eigen::VectorXd col(pts_.rows());
    if (pts_.cols() == 1) {
      const double x = pts_(j, 0);
      for (Eigen::Index i = 0; i < pts_.rows(); ++i) col(i) = kernel_(std::abs(pts_(i, 0) - x));
    } else {
      for (Eigen::Index i = 0; i < pts_.rows(); ++i) col(i) = kernel_((pts_.row(i) - pts_.row(j)).norm());
    }
    col(j) = 1.0;
    return cache_.emplace(j, std::move(col)).first->second;
  }

  /// Drops cached columns outside `keep` once the cache is over its limit.
  void trim(const std::vector<Eigen::Index>& keep) {
    if (cache_.size() <= max_cached_) return;
    std::unordered_map<Eigen::Index, Eigen::VectorXd> kept;
    for (auto j : keep) {
      auto it = cache_.find(j);
      if (it != cache_.end()) kept.emplace(j, std::move(it->second));
    }
    cache_.swap(kept);
  }

 private:
  const Cloud::Matrix& pts_;
  KernelEvaluator<double> kernel_;
  std::size_t max_cached_;
  std::unordered_map<Eigen::Index, Eigen::VectorXd> cache_;
};

namespace detail {

// Solves min v'Pv - 2 sum(v) over v >= 0 for a dense P. Its stationary points map to
// stationary points of the simplex problem through w = v / sum(v). Each round is a
// coordinate descent sweep followed by pairwise mass transfers, which collapse groups
// of points closer than r. Once the gap is small an exact solve on the support is tried.
class FlatSolver {
 public:
  FlatSolver(const Eigen::MatrixXd& p, double tol, long max_rounds, double support_tolerance)
      : p_(p), tol_(tol), max_rounds_(max_rounds), support_tol_(support_tolerance), n_(p.rows()) {}

  /// Starts from v (any nonnegative, nonzero vector). Returns true on certificate.
  bool solve(Eigen::VectorXd& v, long& rounds) {
    v_ = v;
    g_.noalias() = p_ * v_;
    const double scale = v_.sum() / v_.dot(g_);
    v_ *= scale;
    g_ *= scale;

    double next_polish = 1e-4;
    bool ok = false;
    for (rounds = 1; rounds <= max_rounds_; ++rounds) {
      sweep();
      transfers();
      double current = gap();
      if (current <= tol_) {
        ok = true;
        break;
      }
      if (current < next_polish) {
        polish(current);
        if (current <= tol_) {
          ok = true;
          break;
        }
        next_polish = current / 100.0;
      }
    }
    v = v_;
    return ok;
  }

  double gap() const {
    const double mass = v_.sum();
    const double en = v_.dot(g_) / (mass * mass);
    double worst = std::max(en - g_.minCoeff() / mass, 0.0);
    for (Eigen::Index j = 0; j < n_; ++j)
      if (v_(j) / mass > support_tol_) worst = std::max(worst, g_(j) / mass - en);
    return worst / en;
  }

 private:
  void sweep() {
    for (Eigen::Index i = 0; i < n_; ++i) {
      const double nv = std::max(0.0, v_(i) - (g_(i) - 1.0));
      const double dv = nv - v_(i);
      if (dv != 0.0) {
        v_(i) = nv;
        g_.noalias() += dv * p_.col(i);
      }
    }
  }

  void transfers() {
    for (int k = 0; k < kTransfersPerRound; ++k) {
      Eigen::Index toward = 0;
      g_.minCoeff(&toward);
      Eigen::Index away = -1;
      double g_away = -std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (v_(j) > 0.0 && g_(j) > g_away) {
          g_away = g_(j);
          away = j;
        }
      }
      if (away < 0 || away == toward) return;
      const double lin = g_(toward) - g_away;
      const double quad = 2.0 - 2.0 * p_(toward, away);
      const double t_max = v_(away);
      double t = t_max;
      if (quad > 0.0) t = std::min(-lin / quad, t_max);
      if (!(t > 0.0)) return;
      g_.noalias() += t * (p_.col(toward) - p_.col(away));
      v_(toward) += t;
      v_(away) = t >= t_max ? 0.0 : v_(away) - t;
    }
  }

  // Solves P_SS z = 1 on the support; keeps z when it is positive and lowers the gap.
  void polish(double& current) {
    std::vector<Eigen::Index> s;
    for (Eigen::Index i = 0; i < n_; ++i)
      if (v_(i) > 0.0) s.push_back(i);
    const auto k = static_cast<Eigen::Index>(s.size());
    if (k == 0) return;
    Eigen::MatrixXd sub(k, k);
    for (Eigen::Index b = 0; b < k; ++b)
      for (Eigen::Index a = 0; a < k; ++a) sub(a, b) = p_(s[a], s[b]);
    const Eigen::VectorXd z = sub.partialPivLu().solve(Eigen::VectorXd::Ones(k));
    if (!z.allFinite() || z.minCoeff() <= 0.0) return;

    Eigen::VectorXd v_old = v_, g_old = g_;
    const double objective_old = objective();
    v_.setZero();
    for (Eigen::Index a = 0; a < k; ++a) v_(s[a]) = z(a);
    g_.noalias() = p_ * v_;
    const double candidate = gap();
    // accepting only non-increasing objectives keeps warm starts from losing energy
    if (candidate < current && objective() <= objective_old + 1e-14 * std::abs(objective_old)) {
      current = candidate;
    } else {
      v_.swap(v_old);
      g_.swap(g_old);
    }
  }

  double objective() const { return v_.dot(g_) - 2.0 * v_.sum(); }

  static constexpr int kTransfersPerRound = 100;

  const Eigen::MatrixXd& p_;
  double tol_;
  long max_rounds_;
  double support_tol_;
  Eigen::Index n_;
  Eigen::VectorXd v_, g_;
};

// Outer working-set loop for Gram operators too large to materialise: solves densely on
// the support plus the most violated points, then refreshes all potentials.
template <typename Gram>
class WorkingSetSolver {
 public:
  WorkingSetSolver(Gram& gram, const EquilibriumOptions& opt) : gram_(gram), opt_(opt), n_(gram.size()) {}

  EquilibriumResult run() {
    std::mt19937_64 rng(opt_.seed);
    Eigen::VectorXd start = Eigen::VectorXd::Zero(n_);
    if (opt_.warm_start && opt_.warm_start->size() == n_ && opt_.warm_start->minCoeff() >= 0.0 &&
        opt_.warm_start->sum() > 0.0) {
      start = *opt_.warm_start;
    } else {
      start(0) = 1.0;
    }

    long total = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt <= opt_.restarts; ++attempt) {
      if (attempt > 0) {
        start.setZero();
        std::uniform_int_distribution<Eigen::Index> pick(0, n_ - 1);
        start(pick(rng)) = 1.0;
      }
      long rounds = 0;
      const bool ok = solve_from(start, rounds);
      total += rounds;
      if (ok) return finish(total, attempt + 1);
      best_gap = std::min(best_gap, gap_);
    }
    throw SolverError("equilibrium certificate not reached after " +
                          std::to_string(opt_.restarts + 1) + " attempt(s)",
                      best_gap);
  }

 private:
  bool solve_from(const Eigen::VectorXd& start, long& rounds) {
    w_ = start / start.sum();
    rounds = 0;
    for (int outer = 0; outer < kMaxOuter; ++outer) {
      refresh();
      if (gap_ <= opt_.tol) return true;

      // working set: current support plus the most violated outside points
      std::vector<Eigen::Index> work, outside;
      for (Eigen::Index i = 0; i < n_; ++i) {
        if (w_(i) > 0.0) {
          work.push_back(i);
        } else if (g_(i) < energy_) {
          outside.push_back(i);
        }
      }
      const std::size_t add = std::min(outside.size(), std::max<std::size_t>(kMinAdd, work.size()));
      std::partial_sort(outside.begin(), outside.begin() + static_cast<std::ptrdiff_t>(add), outside.end(),
                        [&](Eigen::Index a, Eigen::Index b) { return g_(a) < g_(b); });
      work.insert(work.end(), outside.begin(), outside.begin() + static_cast<std::ptrdiff_t>(add));
      std::sort(work.begin(), work.end());

      const auto k = static_cast<Eigen::Index>(work.size());
      Eigen::MatrixXd sub(k, k);
      for (Eigen::Index b = 0; b < k; ++b) {
        sub(b, b) = 1.0;
        for (Eigen::Index a = b + 1; a < k; ++a) sub(a, b) = sub(b, a) = gram_(work[a], work[b]);
      }
      Eigen::VectorXd v(k);
      for (Eigen::Index a = 0; a < k; ++a) v(a) = w_(work[a]);
      if (v.sum() <= 0.0) v.setOnes();

      long inner = 0;
      FlatSolver flat(sub, opt_.tol / 4.0, opt_.max_iters - rounds, opt_.support_tolerance);
      const bool ok = flat.solve(v, inner);
      rounds += inner;
      w_.setZero();
      for (Eigen::Index a = 0; a < k; ++a) w_(work[a]) = v(a);
      w_ /= w_.sum();
      if (!ok || rounds >= opt_.max_iters) {
        refresh();
        return gap_ <= opt_.tol;
      }
    }
    refresh();
    return gap_ <= opt_.tol;
  }

  // Potentials and gap from scratch for the current weights.
  void refresh() {
    g_.setZero(n_);
    std::vector<Eigen::Index> support;
    for (Eigen::Index j = 0; j < n_; ++j) {
      if (w_(j) > 0.0) {
        g_.noalias() += w_(j) * gram_.column(j);
        support.push_back(j);
      }
    }
    gram_.trim(support);
    energy_ = w_.dot(g_);
    double worst = std::max(energy_ - g_.minCoeff(), 0.0);
    kkt_gap_ = worst / energy_;
    double sup = 0.0;
    for (auto j : support)
      if (w_(j) > opt_.support_tolerance) sup = std::max(sup, g_(j) - energy_);
    support_gap_ = sup / energy_;
    gap_ = std::max(kkt_gap_, support_gap_);
  }

  EquilibriumResult finish(long total, int attempts) const {
    EquilibriumResult res;
    res.weights = w_;
    res.potentials = g_;
    res.energy = energy_;
    res.capacity = 1.0 / energy_;
    res.kkt_gap = kkt_gap_;
    res.support_gap = support_gap_;
    res.support_tolerance = opt_.support_tolerance;
    res.iterations = total;
    res.attempts = attempts;
    return res;
  }

  static constexpr int kMaxOuter = 200;
  static constexpr std::size_t kMinAdd = 32;

  Gram& gram_;
  const EquilibriumOptions& opt_;
  Eigen::Index n_;
  Eigen::VectorXd w_, g_;
  double energy_ = 1.0, kkt_gap_ = 0.0, support_gap_ = 0.0, gap_ = 0.0;
};

}  // namespace detail

/// Minimises w' G w over the probability simplex for a Gram operator (DenseGram, ImplicitGram).
template <typename Gram>
EquilibriumResult minimize_energy_op(Gram& gram, const EquilibriumOptions& opt = {}) {
  opt.validate();
  detail::require(gram.size() > 0, "gram", "must be non-empty");
  return detail::WorkingSetSolver<Gram>(gram, opt).run();
}

/// Minimises w' G w over the probability simplex. G must be symmetric with unit diagonal
/// and entries in [0,1]; the result carries the equilibrium certificate.
template <typename Derived>
EquilibriumResult minimize_energy(const Eigen::MatrixBase<Derived>& gram,
                                  const EquilibriumOptions& opt = {}) {
  const Eigen::MatrixXd g = gram.template cast<double>();
  detail::require(g.rows() == g.cols() && g.rows() > 0, "gram", "must be square and non-empty");
  detail::require((g - g.transpose()).cwiseAbs().maxCoeff() <= 1e-12, "gram", "must be symmetric");
  detail::require(g.minCoeff() >= 0.0 && g.maxCoeff() <= 1.0, "gram", "entries must lie in [0,1]");
  detail::require((g.diagonal().array() == 1.0).all(), "gram", "diagonal must be 1");
  DenseGram op(g);
  return minimize_energy_op(op, opt);
}

/// Indices of one representative (the lowest index) per occupied grid cell of diameter h.
std::vector<Eigen::Index> net_indices(const Cloud::Matrix& points, double h);

/// Equilibrium measure and capacity of the cloud for the given kernel. Clouds much denser
/// than r are solved coarse to fine over nested nets, each level warm-starting the next.
EquilibriumResult capacity(const Cloud& cloud, const KernelSpec& spec,
                           const EquilibriumOptions& opt = {},
                           Eigen::Index cap = kDefaultGramCap);

/// mu-weighted mean over the support of (potential / largest dyadic-annulus share).
/// Annuli around x are |x-y| < r and 2^(k-1) r <= |x-y| < 2^k r.
double mean_annulus_multiplicity(const Cloud& cloud, const EquilibriumResult& eq,
                                 const KernelSpec& spec);

}  // namespace intdim
