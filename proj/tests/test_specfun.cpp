#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "fixtures.hpp"
#include "fracheat/specfun.hpp"

using namespace fracheat;

TEST_CASE("beta matches closed forms and the high-precision fixture") {
  CHECK(beta(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(beta(0.5, 1.5) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-13));
  CHECK(beta(0.02, 1.5) == doctest::Approx(fixtures::kBeta002_15).epsilon(1e-12));
  for (double x : {0.1, 0.5, 1.0, 1.7, 3.0}) {
    CHECK(beta(x, 1) == doctest::Approx(1 / x).epsilon(1e-12));
    CHECK(beta(x, 2.3) == doctest::Approx(beta(2.3, x)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(beta(0, 1), std::domain_error);
  CHECK_THROWS_AS(beta(1, -0.5), std::domain_error);
}

TEST_CASE("model parameters") {
  CHECK(ModelParams::admissible(0.75, 1));
  CHECK(ModelParams::admissible(0.8, 3));
  CHECK_FALSE(ModelParams::admissible(0.75, 3));  // d < 4H fails
  CHECK_FALSE(ModelParams::admissible(0.5, 1));
  CHECK_FALSE(ModelParams::admissible(1.0, 1));
  CHECK_FALSE(ModelParams::admissible(0.9, 2));
  CHECK_THROWS_AS(ModelParams(0.7, 2), std::domain_error);
  CHECK_THROWS_AS(ModelParams(std::nan(""), 1), std::domain_error);
}

TEST_CASE("constants") {
  const auto c = constants(ModelParams(0.75, 1));
  CHECK(c.alpha_h == doctest::Approx(0.375));
  CHECK(c.c_d == 2.0);
  CHECK(c.kappa == doctest::Approx(1 / (2 * std::sqrt(2 * std::numbers::pi))).epsilon(1e-15));
  CHECK(c.c0_sq == doctest::Approx(fixtures::kC0sq_075_1).epsilon(1e-13));

  const auto c3 = constants(ModelParams(0.9, 3));
  CHECK(c3.c_d == -2.0);
  CHECK(c3.c0_sq < 0.0);
}

TEST_CASE("alpha_H B(2H-1, 3/2) tends to 1/2 linearly in eps") {
  auto gap = [](double eps) {
    const double h = 0.5 + eps;
    return std::abs(h * (2 * h - 1) * beta(2 * h - 1, 1.5) - 0.5);
  };
  const double rate = gap(1e-4) / 1e-4;
  CHECK(rate > 0.0);
  for (double eps : {1e-2, 1e-3, 1e-4}) CHECK(gap(eps) <= 10 * eps * rate);
  CHECK(gap(1e-2) > gap(1e-3));
  CHECK(gap(1e-3) > gap(1e-4));
}

TEST_CASE("heat kernel") {
  CHECK(heat_kernel(1, 1, 0, 1) == doctest::Approx(1 / std::sqrt(4 * std::numbers::pi)).epsilon(1e-14));
  CHECK(heat_kernel(1, -0.5, 3, 1) == 0.0);
  CHECK(heat_kernel(1, 0.0, 0, 1) == 0.0);
  CHECK(heat_kernel(2, 1, 0, 1) == doctest::Approx(1 / std::sqrt(8 * std::numbers::pi)).epsilon(1e-14));
  CHECK(heat_kernel(1, 1, 0, 3) == doctest::Approx(std::pow(4 * std::numbers::pi, -1.5)).epsilon(1e-14));
}

TEST_CASE("heat cell integral") {
  CHECK(heat_cell_integral(1, 1, 0, 0, 1) ==
        doctest::Approx(fixtures::kHeatCell_c1_t1_x0_01).epsilon(1e-13));
  CHECK(heat_cell_integral(1, 1, 0.3, -0.2, 0.8) ==
        doctest::Approx(2 * heat_cell_integral(1, 1, 0.3, 0.3, 0.8)).epsilon(1e-14));

  // telescoping partition of [-L, L] plus both tails
  const double c = 0.5, t = 0.7, x = 0.4, L = 10;
  double total = heat_cell_integral(c, t, x, -INFINITY, -L) + heat_cell_integral(c, t, x, L, INFINITY);
  const int n = 2000;
  for (int j = 0; j < n; ++j) {
    total += heat_cell_integral(c, t, x, -L + 2 * L * j / n, -L + 2 * L * (j + 1) / n);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  // far tail cells stay accurate (erfc branch)
  const double tail = heat_cell_integral(1, 1, 0, 12, 13);
  CHECK(tail > 0.0);
  CHECK(tail < 1e-15);

  CHECK_THROWS_AS(heat_cell_integral(1, 0, 0, 0, 1), std::domain_error);
  CHECK_THROWS_AS(heat_cell_integral(1, 1, 0, 1, 1), std::domain_error);
}
