// Monte Carlo simulation of the mild solution of
//   u_t = c u_xx + fractional-in-time, white-in-space noise,   u(0, .) = 0,
// in one space dimension, truncated to [-L, L].
//
// Time is split into nt steps of length T/nt and space into nx cells of width
// 2L/nx. Each cell carries an independent fBm increment vector scaled by
// sqrt(dx); the stochastic convolution is approximated with the heat kernel
// evaluated at the midpoint of every time step and averaged exactly over
// every cell.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace fracheat {

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field(field) {}
  std::string field;
};

struct SpdeConfig {
  double hurst = 0.75;
  double horizon = 1.0;  // T
  int nt = 256;
  double half_width = 8.0;  // L
  int nx = 1024;
  double diffusivity = 0.5;  // c
  std::size_t n_paths = 4000;
  std::uint64_t seed = 1;

  double dt() const { return horizon / nt; }
  double dx() const { return 2.0 * half_width / nx; }
  double time(int i) const { return horizon * i / nt; }

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Keys H, T, nt, L, nx, c, n_paths, seed; missing keys keep their defaults,
/// unknown keys are rejected.
SpdeConfig spde_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SpdeConfig& cfg);

/// Covariance of the nt increments of fBm with Var(B_t) = t^(2H) on a grid of
/// step dt. Accepts H in (0, 1).
Eigen::MatrixXd fbm_increment_gram(double hurst, int nt, double dt);

struct NoiseField {
  Eigen::MatrixXd xi;  // nt x nx, row = time step, column = cell
  double dt = 0.0;
  double dx = 0.0;
};

/// Shared state for one configuration: the Cholesky factor of the increment
/// Gram is computed once and reused for every cell and path.
class SpdeSimulator {
 public:
  explicit SpdeSimulator(SpdeConfig cfg);

  const SpdeConfig& config() const noexcept { return cfg_; }

  /// Noise of Monte Carlo path `path`; identical for identical (seed, path).
  NoiseField sample_noise_field(std::size_t path) const;

  /// Kernel weights W(i, j) for evaluation at grid time index m and point x:
  /// the cell average of the heat kernel at the midpoint lag of step i.
  /// Rows i >= m are zero.
  Eigen::MatrixXd heat_weights(int m, double x) const;

  /// Approximate solution at grid time index m and point x for a given field.
  double mild_value(const NoiseField& field, int m, double x) const;

  /// Exact second moments of the discretized solution at the given time
  /// indices (no sampling error).
  Eigen::MatrixXd scheme_cov(const std::vector<int>& time_indices, double x) const;

  /// Index of the grid time closest to t; throws ConfigError if t is not on
  /// the grid (to 1e-9 T) or not positive.
  int time_index(double t) const;

  /// Row p of the result holds the approximate solution of path p at the
  /// requested time indices.
  Eigen::MatrixXd sample_solution(const std::vector<int>& time_indices, double x,
                                  unsigned workers = 0) const;

 private:
  Eigen::MatrixXd projection(int m, double x) const;
  void draw_standard(std::size_t path, Eigen::MatrixXd& z) const;

  SpdeConfig cfg_;
  Eigen::MatrixXd chol_;  // lower factor of the increment Gram
};

struct McRow {
  double t;
  double s;
  double estimate;
  double std_err;
  std::size_t n;
};

struct MCReport {
  SpdeConfig config;
  double x = 0.0;
  std::vector<double> times;
  Eigen::MatrixXd estimate;  // second moments E[U(t_i) U(t_j)]
  Eigen::MatrixXd std_err;
  std::vector<double> skewness;         // per time
  std::vector<double> excess_kurtosis;  // per time
  double skewness_se = 0.0;             // sqrt(6 / n)
  double kurtosis_se = 0.0;             // sqrt(24 / n)
  std::size_t n = 0;

  /// One row per unordered pair of evaluation times, written with t >= s,
  /// in the order the times were given.
  std::vector<McRow> rows() const;
};

/// Monte Carlo estimate of the second moments of U(., x) at `eval_times`,
/// which must lie on the time grid. |x| <= L / 2.
MCReport mild_mc(const SpdeConfig& cfg, const std::vector<double>& eval_times, double x = 0.0,
                 unsigned workers = 0);

}  // namespace fracheat
