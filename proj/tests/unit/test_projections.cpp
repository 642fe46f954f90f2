#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "intdim/projections.hpp"

using namespace intdim;

TEST_SUITE("projections") {

TEST_CASE("sampled frames are orthonormal and deterministic") {
  for (int n = 2; n <= 5; ++n) {
    for (int m = 1; m < n; ++m) {
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto f = sample_subspace(n, m, seed);
        CHECK(f.dim() == m);
        CHECK(f.ambient_dim() == n);
        CHECK(f.orthonormality_error() <= 1e-10);
        CHECK(f.basis == sample_subspace(n, m, seed).basis);
      }
    }
  }
  CHECK(sample_subspace(3, 1, 1).basis != sample_subspace(3, 1, 2).basis);
  CHECK_THROWS_AS(sample_subspace(2, 2, 0), ValidationError);
  CHECK_THROWS_AS(sample_subspace(2, 0, 0), ValidationError);
}

TEST_CASE("|pi_V e_1| follows the arcsine law for n = 2, m = 1") {
  const int count = 10000;
  std::vector<double> t;
  for (int seed = 0; seed < count; ++seed) t.push_back(std::abs(sample_subspace(2, 1, seed).basis(0, 0)));
  std::sort(t.begin(), t.end());
  // CDF of |cos a| for uniform a: 1 - (2/pi) acos(t)
  double ks = 0.0;
  for (int i = 0; i < count; ++i) {
    const double cdf = 1.0 - 2.0 / std::numbers::pi * std::acos(t[i]);
    ks = std::max({ks, std::abs(cdf - double(i) / count), std::abs(cdf - double(i + 1) / count)});
  }
  CHECK(ks < 0.02);
}

TEST_CASE("projection onto an axis drops the other coordinate and deduplicates") {
  Cloud::Matrix pts(3, 2);
  pts << 0, 0, 1, 0, 0, 1;
  const Cloud c(pts, Provenance{"triangle", {}});
  const Cloud p = project(c, axis_frame(2, {0}));
  REQUIRE(p.size() == 2);
  CHECK(p.point(0)(0) == 0.0);
  CHECK(p.point(1)(0) == 1.0);
  CHECK_THROWS_AS(project(c, axis_frame(3, {0})), ValidationError);
}

TEST_CASE("full-rank frame is an isometry") {
  const Cloud c = product(generate_sequence_set(1.0, 6), generate_sequence_set(2.0, 6));
  SubspaceFrame f;
  const double a = 0.3;
  f.basis.resize(2, 2);
  f.basis << std::cos(a), std::sin(a), -std::sin(a), std::cos(a);
  const Cloud p = project(c, f);
  REQUIRE(p.size() == c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i)
    for (Eigen::Index j = 0; j < c.size(); ++j)
      CHECK((p.point(i) - p.point(j)).norm() == doctest::Approx((c.point(i) - c.point(j)).norm()).epsilon(1e-12));
}

TEST_CASE("projections are 1-Lipschitz") {
  const Cloud c = product(generate_sequence_set(1.0, 8), generate_sequence_set(1.0, 8));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto f = sample_subspace(2, 1, seed);
    for (Eigen::Index i = 0; i < c.size(); ++i)
      for (Eigen::Index j = 0; j < c.size(); ++j) {
        const double before = (c.point(i) - c.point(j)).norm();
        const double after = std::abs(f.basis.row(0).dot(c.point(i) - c.point(j)));
        CHECK(after <= before + 1e-15);
      }
  }
}

TEST_CASE("quantile interpolates") {
  CHECK(quantile({3, 1, 2}, 0.5) == 2.0);
  CHECK(quantile({0, 1}, 0.25) == 0.25);
  CHECK(quantile({5}, 0.9) == 5.0);
}

TEST_CASE("small projection experiment respects the sure bound") {
  const Cloud c = product(generate_sequence_set(1.0, 40), generate_sequence_set(1.0, 40));
  ProjectionOptions opt;
  opt.trials = 3;
  opt.theta_grid = {0.5, 1.0};
  opt.schedule = ScaleSchedule::dyadic(2, 9);
  opt.exceptional = {axis_frame(2, {0})};
  const auto rep = projection_experiment(c, 1, opt);
  CHECK(rep.frames.size() == 4);
  CHECK(rep.is_exceptional.back() == 1);
  CHECK(rep.estimates.size() == 4);
  CHECK(rep.median.size() == 2);
  CHECK(rep.exceed_count == 0);
}

}  // TEST_SUITE
