#include "intdim/covers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "intdim/errors.hpp"
#include "intdim/log.hpp"

namespace intdim {

namespace {

using KeyMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr int kMaxLevel = 60;
constexpr double kBandSlack = 1e-12;

// Sorts rows lexicographically and removes duplicates; `inverse` maps input rows to output rows.
KeyMatrix unique_rows(const KeyMatrix& keys, std::vector<std::int64_t>& inverse) {
  const Eigen::Index n = keys.rows();
  const Eigen::Index d = keys.cols();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  auto less = [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index c = 0; c < d; ++c) {
      if (keys(a, c) != keys(b, c)) return keys(a, c) < keys(b, c);
    }
    return false;
  };
  std::sort(order.begin(), order.end(), less);

  inverse.assign(static_cast<std::size_t>(n), 0);
  std::vector<Eigen::Index> firsts;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k == 0 || less(order[k - 1], order[k])) firsts.push_back(order[k]);
    inverse[static_cast<std::size_t>(order[k])] = static_cast<std::int64_t>(firsts.size() - 1);
  }
  KeyMatrix out(static_cast<Eigen::Index>(firsts.size()), d);
  for (std::size_t k = 0; k < firsts.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = keys.row(firsts[k]);
  return out;
}

KeyMatrix cell_keys(const Cloud& cloud, double inv_side) {
  const auto& pts = cloud.points();
  KeyMatrix keys(pts.rows(), pts.cols());
  for (Eigen::Index i = 0; i < pts.rows(); ++i)
    for (Eigen::Index c = 0; c < pts.cols(); ++c)
      keys(i, c) = static_cast<std::int64_t>(std::floor(pts(i, c) * inv_side));
  return keys;
}

}  // namespace

AdmittedLevels admitted_levels(int ambient_dim, double r, double theta, double unit) {
  const double root_n = unit * std::sqrt(static_cast<double>(ambient_dim));
  const double upper = std::pow(r, theta);
  AdmittedLevels out;
  bool found = false;
  for (int j = 0; j <= kMaxLevel; ++j) {
    const double diam = std::ldexp(root_n, -j);
    if (diam >= r * (1.0 - kBandSlack) && diam <= upper * (1.0 + kBandSlack)) {
      if (!found) out.coarsest = j;
      out.finest = j;
      found = true;
    }
  }
  if (found) return out;

  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int j = 0; j <= kMaxLevel; ++j) {
    const double diam = std::ldexp(root_n, -j);
    const double dist = diam > upper ? std::log(diam / upper) : std::log(r / diam);
    if (dist < best_dist - 1e-12) {
      best_dist = dist;
      best = j;
    }
  }
  out.coarsest = out.finest = best;
  out.exact = false;
  return out;
}

CoverHierarchy::CoverHierarchy(const Cloud& cloud, double r, double theta, double unit)
    : n_(cloud.ambient_dim()), r_(r), theta_(theta), unit_(unit) {
  detail::require(r > 0.0 && r < 1.0, "r", "must lie in (0,1)");
  detail::require(theta > 0.0 && theta <= 1.0, "theta", "must lie in (0,1]");
  detail::require(unit > 0.0, "unit", "must be positive");
  levels_ = admitted_levels(n_, r, theta, unit);

  std::vector<std::int64_t> inverse;
  Level finest;
  finest.j = levels_.finest;
  finest.keys = unique_rows(cell_keys(cloud, std::ldexp(1.0, levels_.finest) / unit), inverse);
  by_level_.push_back(std::move(finest));
  for (int j = levels_.finest - 1; j >= levels_.coarsest; --j) {
    KeyMatrix parents = by_level_.back().keys;
    for (Eigen::Index i = 0; i < parents.size(); ++i) parents.data()[i] >>= 1;  // floor division
    Level next;
    next.j = j;
    next.keys = unique_rows(parents, inverse);
    by_level_.back().parent = std::move(inverse);
    by_level_.push_back(std::move(next));
  }
}

double CoverHierarchy::diameter(int level) const {
  return std::ldexp(unit_ * std::sqrt(static_cast<double>(n_)), -level);
}

std::int64_t CoverHierarchy::occupied(int level) const {
  for (const auto& l : by_level_)
    if (l.j == level) return l.keys.rows();
  return 0;
}

double CoverHierarchy::value(double s) const {
  std::vector<double> cost(static_cast<std::size_t>(by_level_.front().keys.rows()),
                           std::pow(diameter(by_level_.front().j), s));
  for (std::size_t li = 0; li + 1 < by_level_.size(); ++li) {
    const auto& child = by_level_[li];
    const auto& parent = by_level_[li + 1];
    std::vector<double> sums(static_cast<std::size_t>(parent.keys.rows()), 0.0);
    for (std::size_t c = 0; c < cost.size(); ++c) sums[static_cast<std::size_t>(child.parent[c])] += cost[c];
    const double own = std::pow(diameter(parent.j), s);
    for (auto& v : sums) v = std::min(own, v);
    cost.swap(sums);
  }
  return std::accumulate(cost.begin(), cost.end(), 0.0);
}

CoverSumResult CoverHierarchy::evaluate(double s, bool record_cells) const {
  detail::require(s >= 0.0 && s <= n_, "s", "must lie in [0,n]");
  CoverSumResult res;
  res.r = r_;
  res.theta = theta_;
  res.s = s;
  res.r_eff = diameter(levels_.finest);
  res.upper_eff = diameter(levels_.coarsest);
  res.unit = unit_;

  // Bottom-up costs and the "take this cube whole" decision per level.
  std::vector<std::vector<double>> cost(by_level_.size());
  std::vector<std::vector<char>> take(by_level_.size());
  cost[0].assign(static_cast<std::size_t>(by_level_[0].keys.rows()), std::pow(diameter(by_level_[0].j), s));
  take[0].assign(cost[0].size(), 1);
  for (std::size_t li = 0; li + 1 < by_level_.size(); ++li) {
    const auto& child = by_level_[li];
    const auto rows = static_cast<std::size_t>(by_level_[li + 1].keys.rows());
    std::vector<double> sums(rows, 0.0);
    for (std::size_t c = 0; c < cost[li].size(); ++c) sums[static_cast<std::size_t>(child.parent[c])] += cost[li][c];
    const double own = std::pow(diameter(by_level_[li + 1].j), s);
    cost[li + 1].resize(rows);
    take[li + 1].resize(rows);
    for (std::size_t p = 0; p < rows; ++p) {
      take[li + 1][p] = own <= sums[p];  // ties keep the coarse cube
      cost[li + 1][p] = take[li + 1][p] ? own : sums[p];
    }
  }

  // Top-down: a cube is chosen if it takes itself and no ancestor was chosen.
  std::vector<char> covered;  // per cube of the current level: an ancestor was chosen
  double total = 0.0;
  for (std::size_t li = by_level_.size(); li-- > 0;) {
    const auto& lvl = by_level_[li];
    const auto rows = static_cast<std::size_t>(lvl.keys.rows());
    std::vector<char> here(rows, 0);
    if (li + 1 < by_level_.size()) {
      for (std::size_t c = 0; c < rows; ++c) here[c] = covered[static_cast<std::size_t>(lvl.parent[c])];
    }
    const double side = std::ldexp(unit_, -lvl.j);
    const double diam_s = std::pow(diameter(lvl.j), s);
    std::vector<char> next(rows, 0);
    for (std::size_t c = 0; c < rows; ++c) {
      if (here[c]) {
        next[c] = 1;
        continue;
      }
      if (take[li][c]) {
        next[c] = 1;
        total += diam_s;
        res.scale_histogram[lvl.j] += 1;
        if (record_cells) {
          CoverCell cell;
          cell.corner = lvl.keys.row(static_cast<Eigen::Index>(c)).cast<double>().transpose() * side;
          cell.side = side;
          cell.level = lvl.j;
          res.cells.push_back(std::move(cell));
        }
      }
    }
    covered.swap(next);
  }
  res.value = total;
  return res;
}

CoverSum::CoverSum(const Cloud& cloud, double r, double theta, int phases) {
  detail::require(phases >= 1, "phases", "must be at least 1");
  for (int i = 0; i < phases; ++i) {
    const double unit = std::exp2(-static_cast<double>(i) / phases);
    if (i > 0 && !admitted_levels(cloud.ambient_dim(), r, theta, unit).exact) continue;
    families_.emplace_back(cloud, r, theta, unit);
  }
  // the dyadic family's fallback level only counts when no family fits the band
  if (families_.size() > 1 && !families_.front().levels().exact) families_.erase(families_.begin());
}

double CoverSum::value(double s) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : families_) best = std::min(best, f.value(s));
  return best;
}

CoverSumResult CoverSum::evaluate(double s, bool record_cells) const {
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < families_.size(); ++i) {
    const double v = families_[i].value(s);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  return families_[best].evaluate(s, record_cells);
}

CoverSumResult restricted_cover_sum(const Cloud& cloud, double r, double theta, double s, int phases) {
  detail::require(r > 0.0, "r", "must be positive");
  detail::require(r < 1.0, "r", "must be less than 1");
  detail::require(s >= 0.0 && s <= cloud.ambient_dim(), "s", "must lie in [0,n]");
  if (cloud.size() > 1 && r < cloud.resolution()) {
    // below the sample's resolution the sum only reflects the discretisation
    static thread_local bool warned = false;
    if (!warned) {
      warn("cover sum requested at r=" + format_number(r) + " below the cloud resolution " +
           format_number(cloud.resolution()));
      warned = true;
    }
  }
  return CoverSum(cloud, r, theta, phases).evaluate(s);
}

std::int64_t box_count(const Cloud& cloud, double delta) {
  detail::require(delta > 0.0, "delta", "must be positive");
  std::vector<std::int64_t> inverse;
  return unique_rows(cell_keys(cloud, 1.0 / delta), inverse).rows();
}

}  // namespace intdim
