#include <doctest.h>

#include <cmath>

#include "intdim/covers.hpp"

using namespace intdim;

TEST_SUITE("covers") {

TEST_CASE("admitted levels lie inside [r, r^theta]") {
  for (int n : {1, 2, 3}) {
    for (double theta : {0.3, 0.6, 1.0}) {
      const double r = 0x1p-9;
      const auto lv = admitted_levels(n, r, theta);
      for (int j = lv.coarsest; j <= lv.finest; ++j) {
        const double d = std::ldexp(std::sqrt(n), -j);
        if (lv.exact) {
          CHECK(d >= r * (1 - 1e-12));
          CHECK(d <= std::pow(r, theta) * (1 + 1e-12));
        }
      }
    }
  }
}

TEST_CASE("single point: S^s = r_eff^s") {
  const Cloud p = single_point(2);
  for (double s : {0.0, 0.5, 1.0, 2.0}) {
    const auto res = restricted_cover_sum(p, 0x1p-6, 0.5, s);
    CHECK(res.cells.size() == 1);
    CHECK(res.value == doctest::Approx(std::pow(res.r_eff, s)).epsilon(1e-12));
  }
}

TEST_CASE("s = 0 counts cubes at the coarsest admitted level") {
  const Cloud c = generate_ifs_attractor(IfsSystem::middle_third_cantor(), 8);
  const double r = 0x1p-10;
  const CoverHierarchy h(c, r, 0.5);
  const int j = h.levels().coarsest;
  CHECK(h.value(0.0) == static_cast<double>(h.occupied(j)));
  CHECK(h.occupied(j) == box_count(c, std::ldexp(1.0, -j)));
}

TEST_CASE("the optimum is no worse than any single-level cover") {
  const Cloud c = generate_sequence_set(1.0, 500);
  for (double theta : {0.3, 0.7, 1.0}) {
    const CoverHierarchy h(c, 0x1p-12, theta);
    for (double s : {0.1, 0.5, 0.9}) {
      const double v = h.value(s);
      for (int j = h.levels().coarsest; j <= h.levels().finest; ++j)
        CHECK(v <= h.occupied(j) * std::pow(h.diameter(j), s) * (1 + 1e-12));
    }
  }
}

TEST_CASE("chosen cells cover every point and reproduce the value") {
  const Cloud c = product(generate_sequence_set(1.0, 30), generate_sequence_set(1.0, 30));
  const auto res = restricted_cover_sum(c, 0x1p-8, 0.6, 0.8);
  double total = 0.0;
  for (const auto& cell : res.cells) {
    total += std::pow(cell.side * std::sqrt(2.0), 0.8);
    CHECK(cell.side * std::sqrt(2.0) >= res.r_eff * (1 - 1e-12));
    CHECK(cell.side * std::sqrt(2.0) <= res.upper_eff * (1 + 1e-12));
  }
  CHECK(total == doctest::Approx(res.value).epsilon(1e-10));
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    bool covered = false;
    for (const auto& cell : res.cells) {
      const auto off = (c.point(i).transpose() - cell.corner).array();
      if ((off >= -1e-12).all() && (off <= cell.side + 1e-12).all()) covered = true;
    }
    CHECK(covered);
  }
}

TEST_CASE("more phases never increase the sum") {
  const Cloud c = generate_uniform_grid(1, 257);
  for (double s : {0.2, 0.6, 1.0}) {
    const double one = restricted_cover_sum(c, 0x1p-7, 0.5, s, 1).value;
    const double four = restricted_cover_sum(c, 0x1p-7, 0.5, s, 4).value;
    CHECK(four <= one * (1 + 1e-12));
  }
}

TEST_CASE("S^s is nonincreasing in s below diameter 1") {
  const Cloud c = generate_ifs_attractor(IfsSystem::middle_third_cantor(), 9);
  const CoverSum sum(c, 0x1p-12, 0.4);
  double prev = INFINITY;
  for (double s = 0.0; s <= 1.0; s += 0.05) {
    const double v = sum.value(s);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("box counts on the interval grid") {
  const Cloud c = generate_uniform_grid(1, 1025);
  for (int j = 0; j <= 10; ++j) {
    const auto expected = (std::int64_t{1} << j) + 1;  // the right end opens one more cell
    CHECK(box_count(c, std::ldexp(1.0, -j)) == expected);
  }
}

TEST_CASE("invalid arguments") {
  const Cloud c = single_point(1);
  CHECK_THROWS_AS(restricted_cover_sum(c, 1.5, 0.5, 0.5), ValidationError);
  CHECK_THROWS_AS(restricted_cover_sum(c, 0.1, 0.0, 0.5), ValidationError);
  CHECK_THROWS_AS(restricted_cover_sum(c, 0.1, 0.5, -1.0), ValidationError);
  CHECK_THROWS_AS(box_count(c, 0.0), ValidationError);
}

}  // TEST_SUITE
