#include <doctest.h>

#include <cmath>

#include "intdim/profiles.hpp"

using namespace intdim;

TEST_SUITE("profiles") {

TEST_CASE("dyadic scales") {
  const auto r = dyadic_scales(3, 6);
  REQUIRE(r.size() == 4);
  CHECK(r.front() == 0.125);
  CHECK(r.back() == 0x1p-6);
}

TEST_CASE("schedule validation") {
  ScaleSchedule s;
  s.r_values = {0.1, 0.2};
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s.r_values = {0.2, 0.1};
  s.tail_window = 3;
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s.tail_window = 2;
  CHECK_NOTHROW(s.validate());
  CHECK(s.tail().size() == 2);
}

TEST_CASE("binding cuts the schedule at the floor") {
  const Cloud c = generate_uniform_grid(1, 1025);
  const double floor = scale_floor(c);
  CHECK(floor > 0.0);
  CHECK(floor <= 0x1p-8);
  const auto bound = bind_schedule(ScaleSchedule{}, c);
  CHECK(bound.r_values.back() >= floor);
  CHECK(scale_floor(single_point(2)) == 0.0);
  CHECK_THROWS_AS(bind_schedule(ScaleSchedule::dyadic(5, 40, 3), generate_uniform_grid(1, 9)), ValidationError);
}

TEST_CASE("cover estimate of the Cantor set at theta = 1") {
  const Cloud c = generate_ifs_attractor(IfsSystem::middle_third_cantor(), 10);
  const auto sched = bind_schedule(ScaleSchedule{}, c);
  const auto res = cover_fixed_point(c, 1.0, sched);
  CHECK(res.estimate == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(0.05 / 0.63));
  CHECK(std::abs(res.residual) < 0.01);
  CHECK_FALSE(res.clamped);
  CHECK_FALSE(res.diagnostics.empty());
}

TEST_CASE("single point has dimension 0") {
  const auto res = cover_fixed_point(single_point(1), 0.5, ScaleSchedule::dyadic(4, 10));
  CHECK(res.estimate == doctest::Approx(0.0).epsilon(1e-3));
  const auto cap = capacity_fixed_point(single_point(2), 0.5, 1, ScaleSchedule::dyadic(4, 10));
  CHECK(cap.estimate == doctest::Approx(0.0).epsilon(1e-3));
}

TEST_CASE("capacity estimate of the interval and its certificates") {
  const Cloud c = generate_uniform_grid(1, 1025);
  const auto sched = bind_schedule(ScaleSchedule{}, c);
  const auto res = capacity_fixed_point(c, 0.7, 1, sched);
  CHECK(res.estimate == doctest::Approx(1.0).epsilon(0.05));
  CHECK(res.max_kkt_gap <= 1e-6);
  CHECK(res.solves > 0);
}

TEST_CASE("upper and lower limits agree on self-similar data") {
  const Cloud c = generate_ifs_attractor(IfsSystem::middle_third_cantor(), 9);
  EstimatorOptions opt;
  opt.quotient = Quotient::Ratio;
  const auto sched = bind_schedule(ScaleSchedule{}, c);
  const double lo = intermediate_dimension(c, 1.0, sched, LimitMode::Lower, opt);
  const double hi = intermediate_dimension(c, 1.0, sched, LimitMode::Upper, opt);
  CHECK(lo <= hi + 1e-9);
  CHECK(hi - lo < 0.1);
}

TEST_CASE("profile curves and worst decrease") {
  DimensionProfile p;
  p.estimates = {0.1, 0.3, 0.25, 0.5};
  CHECK(p.worst_decrease() == doctest::Approx(0.05));
  const auto grid = default_theta_grid();
  REQUIRE(grid.size() == 10);
  CHECK(grid.front() == doctest::Approx(0.1));
  CHECK(grid.back() == 1.0);
}

TEST_CASE("F_1 cover profile follows theta / (1 + theta)") {
  const Cloud c = generate_sequence_set(1.0, 1000);
  const auto sched = bind_schedule(ScaleSchedule{}, c);
  const auto prof = cover_curve(c, {0.5, 1.0}, sched);
  CHECK(prof.estimates[0] == doctest::Approx(1.0 / 3.0).epsilon(0.1 / 0.33));
  CHECK(prof.estimates[1] == doctest::Approx(0.5).epsilon(0.1));
  CHECK(prof.worst_decrease() <= 0.02);
}

TEST_CASE("estimator option validation") {
  EstimatorOptions opt;
  opt.tol_s = 0.0;
  CHECK_THROWS_AS(opt.validate(), ValidationError);
  opt = {};
  opt.net_factor = -1.0;
  CHECK_THROWS_AS(opt.validate(), ValidationError);
  CHECK_THROWS_AS(capacity_fixed_point(single_point(1), 0.5, 2, ScaleSchedule::dyadic(4, 8)), ValidationError);
}

}  // TEST_SUITE
