#include <doctest.h>

#include <cmath>
#include <numbers>

#include "intdim/verify.hpp"

using namespace intdim;

TEST_SUITE("verify") {

TEST_CASE("dyadic slack") {
  CHECK(dyadic_slack(1) == 4.0);
  CHECK(dyadic_slack(3) == 64.0);
}

TEST_CASE("exponent pairs are ordered, bounded and deterministic") {
  const auto pairs = random_exponent_pairs(10, 2.0, 5);
  REQUIRE(pairs.size() == 11);
  for (auto [t, s] : pairs) {
    CHECK(t >= 0.0);
    CHECK(t <= s);
    CHECK(s <= 2.0);
  }
  CHECK(pairs.back().first == 1.0);
  CHECK(pairs.back().second == 1.0);
  CHECK(pairs == random_exponent_pairs(10, 2.0, 5));
}

TEST_CASE("check reports track the worst margin") {
  CheckReport rep{"x"};
  rep.add("a", -0.5);
  CHECK(rep.pass);
  rep.add("b", 0.1);
  CHECK_FALSE(rep.pass);
  CHECK(rep.worst_margin == 0.1);
  CHECK(rep.instances == 2);
  CheckReport outer{"y"};
  outer.merge(rep, "cloud");
  CHECK(outer.details.front().instance.rfind("cloud", 0) == 0);
  CHECK_FALSE(outer.pass);
}

TEST_CASE("slab closed forms") {
  const double r = 0.01;
  CHECK(slab_integral_exact(0.005, r, 1, 2) == 1.0);
  CHECK(slab_integral_exact(0.02, r, 1, 2) == doctest::Approx(2.0 / std::numbers::pi * std::asin(0.5)));
  CHECK(slab_integral_exact(0.04, r, 1, 3) == doctest::Approx(0.25));
  CHECK(slab_integral_exact(0.02, r, 2, 3) == doctest::Approx(1.0 - std::sqrt(0.75)));
  CHECK(std::isnan(slab_integral_exact(0.02, r, 1, 4)));
}

TEST_CASE("cover-sum Lipschitz bounds on the Cantor set") {
  const Cloud c = generate_ifs_attractor(IfsSystem::middle_third_cantor(), 8);
  for (double theta : {0.3, 1.0}) {
    const auto rep = check_sum_lipschitz(c, 0x1p-7, theta, random_exponent_pairs(10, 1.0, 1));
    CHECK(rep.pass);
    CHECK(rep.instances == 11);
  }
}

TEST_CASE("capacity Lipschitz bounds on F_1") {
  const Cloud c = generate_sequence_set(1.0, 300);
  const auto rep = check_capacity_lipschitz(c, 0x1p-6, 0.7, 1, random_exponent_pairs(5, 1.0, 2));
  CHECK(rep.pass);
}

TEST_CASE("sandwich left bound and trend on the interval") {
  const Cloud c = generate_uniform_grid(1, 257);
  const auto rep = check_sandwich(c, 0.5, 0.5, ScaleSchedule::dyadic(4, 8));
  CHECK(rep.pass);
}

TEST_CASE("slab integral matches the closed forms") {
  MonteCarloOptions mc;
  mc.trials = 20000;
  for (auto [n, m] : {std::pair{2, 1}, {3, 1}, {3, 2}}) {
    const auto rep = check_slab_integral({0.5, 2.0, 5.0}, {0x1p-6, 0x1p-8}, m, n, mc);
    CHECK_MESSAGE(rep.check.pass, "n=", n, " m=", m, " worst=", rep.check.worst_margin);
    for (const auto& s : rep.samples) CHECK(s.relative_se <= mc.target_se);
  }
}

TEST_CASE("Monte Carlo precondition checks") {
  MonteCarloOptions mc;
  mc.trials = 10;
  CHECK_THROWS_AS(check_slab_integral({1.0}, {0.01}, 1, 2, mc), ValidationError);
  CHECK_THROWS_AS(check_slab_integral({1.0}, {0.01}, 2, 2), ValidationError);
  CHECK_THROWS_AS(check_kernel_comparison({0.5}, {0.01}, 0.5, 1.0, 1, 2), ValidationError);
}

TEST_CASE("truncated lower bound on F_1 x F_1") {
  const Cloud c = product(generate_sequence_set(1.0, 20), generate_sequence_set(1.0, 20));
  const auto rep = check_truncated_lower_bound(c, 0x1p-6, 0.5, 1.0);
  CHECK(rep.pass);
}

TEST_CASE("canonical suites") {
  const auto small = canonical_suite(SuiteGrade::Inequality);
  CHECK(small.size() == 6);
  CHECK(small.front().cloud.size() == 1);
  const auto big = canonical_suite(SuiteGrade::Estimation);
  CHECK(big.size() == 5);
}

}  // TEST_SUITE
