#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "intdim/errors.hpp"
#include "intdim/geometry.hpp"

namespace intdim {

enum class KernelVariant { Full, Box, Truncated };

inline const char* to_string(KernelVariant v) {
  switch (v) {
    case KernelVariant::Full: return "full";
    case KernelVariant::Box: return "box";
    case KernelVariant::Truncated: return "truncated";
  }
  return "?";
}

struct KernelSpec {
  double r = 0.1;
  double theta = 1.0;
  double s = 0.0;
  int m = 1;
  KernelVariant variant = KernelVariant::Full;

  /// Throws ValidationError naming the first bad field. Pass ambient_dim >= 1 to also check m <= n.
  void validate(int ambient_dim = 0) const {
    detail::require(r > 0.0 && r < 1.0, "r", "must lie in (0,1)");
    detail::require(theta > 0.0 && theta <= 1.0, "theta", "must lie in (0,1]");
    detail::require(m >= 1, "m", "must be at least 1");
    detail::require(ambient_dim <= 0 || m <= ambient_dim, "m", "must not exceed the ambient dimension");
    detail::require(s >= 0.0 && s <= m, "s", "must lie in [0,m]");
    detail::require(theta == 1.0 || r < std::pow(r, theta), "theta", "r^theta must exceed r");
  }
};

/// Evaluates one kernel family with the breakpoints and outer constant precomputed.
template <typename Scalar = double>
class KernelEvaluator {
 public:
  explicit KernelEvaluator(const KernelSpec& spec)
      : variant_(spec.variant), r_(spec.r), s_(spec.s), m_(spec.m) {
    spec.validate();
    if (variant_ == KernelVariant::Full && spec.theta == 1.0) variant_ = KernelVariant::Box;
    r_theta_ = std::pow(r_, Scalar(spec.theta));
    outer_ = std::pow(r_, Scalar(spec.theta * (spec.m - spec.s) + spec.s));
  }

  Scalar operator()(Scalar d) const {
    if (d < r_) return Scalar(1);
    switch (variant_) {
      case KernelVariant::Box:
        return int_power(r_ / d, m_);
      case KernelVariant::Full:
        if (d < r_theta_) return std::pow(r_ / d, s_);
        return outer_ / int_power(d, m_);
      case KernelVariant::Truncated:
        if (d <= r_theta_) return std::pow(r_ / d, s_);
        return Scalar(0);
    }
    return Scalar(0);
  }

  Scalar r_theta() const { return r_theta_; }

 private:
  static Scalar int_power(Scalar x, int k) {
    Scalar out(1);
    for (; k > 0; --k) out *= x;
    return out;
  }

  KernelVariant variant_;
  Scalar r_, s_;
  Scalar r_theta_{}, outer_{};
  int m_;
};

template <typename Scalar>
Scalar kernel_eval(Scalar distance, const KernelSpec& spec) {
  return KernelEvaluator<Scalar>(spec)(distance);
}

inline constexpr Eigen::Index kDefaultGramCap = 20000;

/// Dense Gram matrix with entry (i,j) = kernel(|x_i - x_j|). Symmetric, unit diagonal.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> gram_matrix(
    const PointCloud<Scalar>& cloud, const KernelSpec& spec,
    Eigen::Index cap = kDefaultGramCap) {
  spec.validate();
  const Eigen::Index n = cloud.size();
  if (n > cap) {
    throw BudgetError("gram matrix of " + std::to_string(n) + " points exceeds the cap of " +
                      std::to_string(cap));
  }
  const KernelEvaluator<Scalar> k(spec);
  const auto& pts = cloud.points();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    g(j, j) = Scalar(1);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const Scalar v = k((pts.row(i) - pts.row(j)).norm());
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

}  // namespace intdim
