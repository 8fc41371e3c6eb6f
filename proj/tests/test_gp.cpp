#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "fracheat/gp.hpp"

using namespace fracheat;

TEST_CASE("time grids") {
  const auto g = TimeGrid::uniform(4, 2.0);
  REQUIRE(g.size() == 4);
  CHECK(g[0] == 0.5);
  CHECK(g[3] == 2.0);
  CHECK(TimeGrid::uniform(0).size() == 0);
  CHECK_THROWS_AS(TimeGrid({0.0, 1.0}, 1.0), std::domain_error);
  CHECK_THROWS_AS(TimeGrid({0.5, 0.5}, 1.0), std::domain_error);
  CHECK_THROWS_AS(TimeGrid({0.5, 1.5}, 1.0), std::domain_error);
  CHECK_THROWS_AS(TimeGrid({0.5}, 0.0), std::domain_error);
}

TEST_CASE("Gram matrix") {
  const KernelSpec k = kernel::BifBm{0.4, 0.8};
  const auto g = build_gram(k, TimeGrid::uniform(7), 3);
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 7; ++j) {
      CHECK(g.entries(i, j) == evaluate(k, (i + 1) / 7.0, (j + 1) / 7.0));
      CHECK(g.entries(i, j) == g.entries(j, i));
    }
  }
  CHECK_FALSE(g.min_eigen.has_value());
  CHECK_THROWS_AS(build_gram(kernel::RZ{0.6}, TimeGrid::uniform(3)), std::domain_error);
}

TEST_CASE("factorization and the jitter ladder") {
  const auto g = build_gram(kernel::Swanson{}, TimeGrid::uniform(10));
  const auto f = factorize(g.entries);
  CHECK(f.jitter_level == 0);
  CHECK(f.jitter == 0.0);
  CHECK((f.lower * f.lower.transpose() - g.entries).cwiseAbs().maxCoeff() < 1e-14);

  // a repeated time makes the matrix singular; a small jitter rescues it
  Eigen::MatrixXd dup(3, 3);
  const double ts[] = {0.5, 0.5, 1.0};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) dup(i, j) = swanson_cov(ts[i], ts[j]);
  const auto fd = factorize(dup);
  CHECK(fd.jitter_level > 0);
  CHECK(fd.jitter == doctest::Approx(kJitterLadder[fd.jitter_level] * dup.trace() / 3));

  Eigen::MatrixXd bad(2, 2);
  bad << 1, 2, 2, 1;
  CHECK_THROWS_AS(factorize(bad), PsdError);
  const auto audit = audit_psd(bad);
  CHECK_FALSE(audit.factorized);
  CHECK(audit.min_eigen == doctest::Approx(-1.0));
  CHECK(audit.trace == 2.0);

  auto gm = build_gram(kernel::BifBm{0.5, 0.5}, TimeGrid::uniform(5));
  const auto a = audit_psd(gm);
  CHECK(a.factorized);
  CHECK(gm.min_eigen.has_value());
  CHECK(*gm.min_eigen > 0.0);
}

TEST_CASE("sampling is deterministic and independent of worker count") {
  const auto g = build_gram(kernel::BifBm{0.5, 0.5}, TimeGrid::uniform(6));
  const auto a = sample_paths(g, 300, 42, 1);
  const auto b = sample_paths(g, 300, 42, 4);
  const auto c = sample_paths(g, 300, 43, 1);
  CHECK(a.paths == b.paths);
  CHECK(a.paths != c.paths);
  CHECK(a.kernel_id == "bifbm(H=0.5,K=0.5)");
  CHECK(a.times == g.grid.times());
  // the first 100 paths do not depend on how many are drawn
  const auto d = sample_paths(g, 100, 42, 2);
  CHECK(d.paths == a.paths.topRows(100));
}

TEST_CASE("empirical covariance and z-scores") {
  Eigen::MatrixXd x(4, 2);
  x << 1, 2, 3, 1, -1, 0, 1, 1;
  const auto e = empirical_cov(x);
  // means (1, 1); centred columns (0, 2, -2, 0) and (1, 0, -1, 0)
  CHECK(e.value(0, 0) == doctest::Approx(8.0 / 3));
  CHECK(e.value(1, 1) == doctest::Approx(2.0 / 3));
  CHECK(e.value(0, 1) == doctest::Approx(2.0 / 3));
  CHECK(e.std_err(0, 1) == doctest::Approx(std::sqrt((8.0 / 3 * 2.0 / 3 + 4.0 / 9) / 3)));
  CHECK_THROWS(empirical_cov(Eigen::MatrixXd(1, 2)));

  Eigen::MatrixXd target = e.value;
  target(0, 1) = target(1, 0) = e.value(0, 1) + 2 * e.std_err(0, 1);
  const auto z = compare_cov(e, target);
  CHECK(z.max_abs_z == doctest::Approx(2.0));
  CHECK(z.row == 0);
  CHECK(z.col == 1);
  CHECK_THROWS(compare_cov(e, Eigen::MatrixXd::Zero(3, 3)));

  Eigen::MatrixXd constant(3, 2);
  constant << 1, 0, 1, 1, 1, 2;
  CHECK(compare_cov(empirical_cov(constant), Eigen::MatrixXd::Zero(2, 2)).excluded == 2);
}

TEST_CASE("sampled covariance agrees with the kernel") {
  const auto g = build_gram(kernel::BifBm{0.5, 0.5}, TimeGrid::uniform(8));
  const auto e = sample_paths(g, 5000, 7);
  CHECK(compare_cov(empirical_cov(e), g.entries).max_abs_z <= 4.5);
}
