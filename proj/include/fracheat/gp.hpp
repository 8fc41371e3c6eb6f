// Exact Gaussian-process machinery on finite time grids.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracheat/kernels.hpp"

namespace fracheat {

/// Strictly increasing positive times, all <= horizon.
class TimeGrid {
 public:
  TimeGrid(std::vector<double> times, double horizon);

  /// n points horizon/n, 2 horizon/n, ..., horizon.
  static TimeGrid uniform(int n, double horizon = 1.0);

  const std::vector<double>& times() const noexcept { return times_; }
  double horizon() const noexcept { return horizon_; }
  std::size_t size() const noexcept { return times_.size(); }
  double operator[](std::size_t i) const { return times_[i]; }

 private:
  std::vector<double> times_;
  double horizon_;
};

class GramError : public std::runtime_error {
 public:
  GramError(std::size_t row, std::size_t col, const std::string& what);
  std::size_t row;
  std::size_t col;
};

/// Raised when no rung of the jitter ladder yields a Cholesky factor.
class PsdError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GramMatrix {
  KernelSpec kernel;
  TimeGrid grid;
  Eigen::MatrixXd entries;
  std::optional<double> min_eigen;  // set by audit_psd
};

/// entries(i, j) = kernel(t_i, t_j), evaluated for i <= j and mirrored.
/// Rows are distributed over `workers` threads (0 = hardware concurrency).
GramMatrix build_gram(const KernelSpec& kernel, const TimeGrid& grid, unsigned workers = 0);

/// Relative diagonal jitter levels tried in order, in units of trace/n.
inline constexpr double kJitterLadder[] = {0.0, 1e-12, 1e-10};

struct PsdAudit {
  double min_eigen = 0.0;
  double trace = 0.0;
  bool factorized = false;
  int jitter_level = -1;  // index into kJitterLadder, -1 if none worked
  double jitter = 0.0;    // absolute diagonal shift that was used
};

struct CholeskyFactor {
  Eigen::MatrixXd lower;
  int jitter_level = 0;
  double jitter = 0.0;
};

/// Cholesky factor with the smallest ladder jitter whose pivots all exceed
/// n * eps * max diagonal. Throws PsdError if every level fails.
CholeskyFactor factorize(const Eigen::MatrixXd& cov);

/// Minimum eigenvalue plus the factorization outcome; never throws on a
/// failed factorization (factorized == false instead).
PsdAudit audit_psd(const Eigen::MatrixXd& cov);
PsdAudit audit_psd(GramMatrix& gram);

struct PathEnsemble {
  std::string kernel_id;
  std::vector<double> times;
  Eigen::MatrixXd paths;  // n_paths x n
  std::uint64_t seed = 0;
  double jitter = 0.0;
};

/// Rows are i.i.d. N(0, cov); row k uses random stream (seed, k).
Eigen::MatrixXd sample_gaussian(const CholeskyFactor& factor, std::size_t n_paths,
                                std::uint64_t seed, unsigned workers = 0);

PathEnsemble sample_paths(const GramMatrix& gram, std::size_t n_paths, std::uint64_t seed,
                          unsigned workers = 0);

/// Sample covariance with Gaussian delta-method standard errors
/// sqrt((S_ii S_jj + S_ij^2) / (n - 1)).
struct CovEstimate {
  Eigen::MatrixXd value;
  Eigen::MatrixXd std_err;
  std::size_t n = 0;
};

/// Two-pass estimator; requires at least two rows.
CovEstimate empirical_cov(const Eigen::MatrixXd& paths);
inline CovEstimate empirical_cov(const PathEnsemble& e) { return empirical_cov(e.paths); }

struct ZScoreReport {
  double max_abs_z = 0.0;
  std::size_t row = 0;
  std::size_t col = 0;
  std::size_t excluded = 0;  // entries with zero standard error
};

/// Worst |empirical - analytic| / std_err over the upper triangle.
ZScoreReport compare_cov(const CovEstimate& empirical, const Eigen::MatrixXd& analytic);

}  // namespace fracheat
