#include <doctest.h>

#include <cmath>

#include "intdim/kernels.hpp"

using namespace intdim;

TEST_SUITE("kernels") {

TEST_CASE("full kernel branches") {
  const KernelSpec spec{0.01, 0.5, 0.5, 1, KernelVariant::Full};
  CHECK(kernel_eval(0.005, spec) == 1.0);
  CHECK(kernel_eval(0.04, spec) == doctest::Approx(std::pow(0.25, 0.5)));
  // outer branch r^{theta(m-s)+s} / d^m
  CHECK(kernel_eval(0.5, spec) == doctest::Approx(std::pow(0.01, 0.75) / 0.5));
}

TEST_CASE("full kernel is continuous at r and r^theta and nonincreasing") {
  for (double theta : {0.2, 0.5, 0.9}) {
    for (double s : {0.0, 0.3, 1.0, 1.7}) {
      const KernelSpec spec{0x1p-8, theta, s, 2, KernelVariant::Full};
      const KernelEvaluator<double> k(spec);
      const double rt = k.r_theta();
      CHECK(k(rt * (1 - 1e-12)) == doctest::Approx(k(rt * (1 + 1e-12))).epsilon(1e-9));
      CHECK(k(spec.r * (1 + 1e-12)) == doctest::Approx(1.0).epsilon(1e-9));
      double prev = 1.0;
      for (double d = 1e-4; d < 4.0; d *= 1.1) {
        CHECK(k(d) <= prev * (1 + 1e-12));
        prev = k(d);
      }
    }
  }
}

TEST_CASE("theta = 1 reduces to the box kernel") {
  const KernelSpec full{0.1, 1.0, 0.4, 2, KernelVariant::Full};
  const KernelSpec box{0.1, 1.0, 0.4, 2, KernelVariant::Box};
  for (double d : {0.05, 0.1, 0.2, 0.7, 3.0}) CHECK(kernel_eval(d, full) == kernel_eval(d, box));
  CHECK(kernel_eval(0.2, box) == doctest::Approx(0.25));
}

TEST_CASE("truncated kernel vanishes beyond r^theta") {
  const KernelSpec spec{0.01, 0.5, 0.5, 1, KernelVariant::Truncated};
  CHECK(kernel_eval(0.1, spec) == doctest::Approx(std::pow(0.1, 0.5)));
  CHECK(kernel_eval(0.1000001, spec) == 0.0);
}

TEST_CASE("KernelSpec validation names the field") {
  auto field_of = [](KernelSpec spec, int n = 0) {
    try {
      spec.validate(n);
    } catch (const ValidationError& e) {
      return e.field();
    }
    return std::string("ok");
  };
  CHECK(field_of({0.0, 0.5, 0.1, 1}) == "r");
  CHECK(field_of({0.1, 0.0, 0.1, 1}) == "theta");
  CHECK(field_of({0.1, 0.5, 0.1, 0}) == "m");
  CHECK(field_of({0.1, 0.5, 0.1, 2}, 1) == "m");
  CHECK(field_of({0.1, 0.5, 1.5, 1}) == "s");
  CHECK(field_of({0.1, 0.5, 0.5, 1}) == "ok");
}

TEST_CASE("gram matrix is symmetric with unit diagonal and honours the cap") {
  const Cloud c = generate_sequence_set(1.0, 40);
  const KernelSpec spec{0x1p-6, 0.5, 0.5, 1};
  const Eigen::MatrixXd g = gram_matrix(c, spec);
  CHECK((g - g.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((g.diagonal().array() == 1.0).all());
  CHECK(g.minCoeff() >= 0.0);
  CHECK(g.maxCoeff() <= 1.0);
  CHECK(g(3, 7) == kernel_eval(std::abs(c.point(3)(0) - c.point(7)(0)), spec));
  CHECK_THROWS_AS(gram_matrix(c, spec, 10), BudgetError);
}

}  // TEST_SUITE
