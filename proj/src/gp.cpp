#include "fracheat/gp.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <random>

#include "fracheat/parallel.hpp"
#include "fracheat/random.hpp"

namespace fracheat {

TimeGrid::TimeGrid(std::vector<double> times, double horizon)
    : times_(std::move(times)), horizon_(horizon) {
  if (!(horizon > 0.0)) throw std::domain_error("time horizon must be positive");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!(times_[i] > 0.0) || times_[i] > horizon) {
      throw std::domain_error("grid times must lie in (0, T]");
    }
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw std::domain_error("grid times must be strictly increasing");
    }
  }
}

TimeGrid TimeGrid::uniform(int n, double horizon) {
  if (n < 0) throw std::domain_error("grid size must be non-negative");
  std::vector<double> times(n);
  for (int i = 0; i < n; ++i) times[i] = horizon * (i + 1) / n;
  return TimeGrid(std::move(times), horizon);
}

GramError::GramError(std::size_t r, std::size_t c, const std::string& what)
    : std::runtime_error("kernel evaluation failed at (" + std::to_string(r) + ", " +
                         std::to_string(c) + "): " + what),
      row(r),
      col(c) {}

GramMatrix build_gram(const KernelSpec& kernel, const TimeGrid& grid, unsigned workers) {
  validate(kernel);
  const std::size_t n = grid.size();
  Eigen::MatrixXd entries(n, n);
  parallel_for(n, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        try {
          entries(i, j) = evaluate(kernel, grid[i], grid[j]);
        } catch (const std::exception& ex) {
          throw GramError(i, j, ex.what());
        }
        entries(j, i) = entries(i, j);
      }
    }
  });
  return GramMatrix{kernel, grid, std::move(entries), std::nullopt};
}

namespace {

double mean_diagonal(const Eigen::MatrixXd& m) {
  return m.rows() == 0 ? 0.0 : m.trace() / static_cast<double>(m.rows());
}

bool try_cholesky(const Eigen::MatrixXd& cov, double jitter, Eigen::MatrixXd& lower) {
  const Eigen::Index n = cov.rows();
  Eigen::MatrixXd shifted = cov;
  shifted.diagonal().array() += jitter;
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  if (llt.info() != Eigen::Success) return false;
  lower = llt.matrixL();
  const double floor =
      static_cast<double>(n) * std::numeric_limits<double>::epsilon() * shifted.diagonal().maxCoeff();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(lower(i, i) * lower(i, i) > floor)) return false;
  }
  return true;
}

}  // namespace

CholeskyFactor factorize(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols()) throw std::invalid_argument("covariance must be square");
  const double scale = mean_diagonal(cov);
  CholeskyFactor out;
  for (int level = 0; level < static_cast<int>(std::size(kJitterLadder)); ++level) {
    const double jitter = kJitterLadder[level] * scale;
    if (try_cholesky(cov, jitter, out.lower)) {
      out.jitter_level = level;
      out.jitter = jitter;
      return out;
    }
  }
  throw PsdError("covariance matrix is not positive definite at any jitter level");
}

PsdAudit audit_psd(const Eigen::MatrixXd& cov) {
  PsdAudit audit;
  audit.trace = cov.trace();
  if (cov.rows() == 0) {
    audit.factorized = true;
    audit.jitter_level = 0;
    return audit;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
  audit.min_eigen = eig.eigenvalues().minCoeff();
  try {
    const CholeskyFactor f = factorize(cov);
    audit.factorized = true;
    audit.jitter_level = f.jitter_level;
    audit.jitter = f.jitter;
  } catch (const PsdError&) {
    audit.factorized = false;
  }
  return audit;
}

PsdAudit audit_psd(GramMatrix& gram) {
  PsdAudit audit = audit_psd(gram.entries);
  gram.min_eigen = audit.min_eigen;
  return audit;
}

Eigen::MatrixXd sample_gaussian(const CholeskyFactor& factor, std::size_t n_paths,
                                std::uint64_t seed, unsigned workers) {
  const Eigen::Index n = factor.lower.rows();
  Eigen::MatrixXd paths(static_cast<Eigen::Index>(n_paths), n);
  parallel_for(n_paths, workers, [&](std::size_t begin, std::size_t end) {
    Eigen::VectorXd z(n);
    for (std::size_t k = begin; k < end; ++k) {
      StreamRng rng(seed, k);
      std::normal_distribution<double> normal;
      for (Eigen::Index i = 0; i < n; ++i) z(i) = normal(rng);
      paths.row(static_cast<Eigen::Index>(k)) =
          (factor.lower.triangularView<Eigen::Lower>() * z).transpose();
    }
  });
  return paths;
}

PathEnsemble sample_paths(const GramMatrix& gram, std::size_t n_paths, std::uint64_t seed,
                          unsigned workers) {
  const CholeskyFactor factor = factorize(gram.entries);
  PathEnsemble e;
  e.kernel_id = kernel_id(gram.kernel);
  e.times = gram.grid.times();
  e.paths = sample_gaussian(factor, n_paths, seed, workers);
  e.seed = seed;
  e.jitter = factor.jitter;
  return e;
}

CovEstimate empirical_cov(const Eigen::MatrixXd& paths) {
  const Eigen::Index n = paths.rows();
  if (n < 2) throw std::invalid_argument("empirical covariance needs at least two paths");
  const Eigen::RowVectorXd mean = paths.colwise().sum() / static_cast<double>(n);
  const Eigen::MatrixXd centered = paths.rowwise() - mean;
  CovEstimate out;
  out.n = static_cast<std::size_t>(n);
  out.value = (centered.transpose() * centered) / static_cast<double>(n - 1);
  const Eigen::VectorXd diag = out.value.diagonal();
  out.std_err = ((diag * diag.transpose()).array() + out.value.array().square()).sqrt() /
                std::sqrt(static_cast<double>(n - 1));
  return out;
}

ZScoreReport compare_cov(const CovEstimate& empirical, const Eigen::MatrixXd& analytic) {
  if (empirical.value.rows() != analytic.rows() || empirical.value.cols() != analytic.cols()) {
    throw std::invalid_argument("covariance shapes differ");
  }
  ZScoreReport report;
  for (Eigen::Index i = 0; i < analytic.rows(); ++i) {
    for (Eigen::Index j = i; j < analytic.cols(); ++j) {
      const double se = empirical.std_err(i, j);
      if (!(se > 0.0)) {
        ++report.excluded;
        continue;
      }
      const double z = std::abs(empirical.value(i, j) - analytic(i, j)) / se;
      if (z > report.max_abs_z) {
        report.max_abs_z = z;
        report.row = static_cast<std::size_t>(i);
        report.col = static_cast<std::size_t>(j);
      }
    }
  }
  return report;
}

}  // namespace fracheat
