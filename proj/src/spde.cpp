#include "fracheat/spde.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fracheat/gp.hpp"
#include "fracheat/parallel.hpp"
#include "fracheat/random.hpp"
#include "fracheat/specfun.hpp"

namespace fracheat {

void SpdeConfig::validate() const {
  if (!(hurst > 0.5 && hurst < 1.0)) throw ConfigError("H", "must lie in (1/2, 1)");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("T", "must be positive");
  if (nt < 2) throw ConfigError("nt", "must be at least 2");
  if (nx < 2) throw ConfigError("nx", "must be at least 2");
  if (!(diffusivity > 0.0) || !std::isfinite(diffusivity)) {
    throw ConfigError("c", "must be positive");
  }
  if (!(half_width >= 4.0 * std::sqrt(diffusivity * horizon))) {
    throw ConfigError("L", "must be at least 4 sqrt(c T) = " +
                               std::to_string(4.0 * std::sqrt(diffusivity * horizon)));
  }
  if (n_paths < 2) throw ConfigError("n_paths", "must be at least 2");
}

namespace {

template <class T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(key, "has the wrong type");
  }
}

}  // namespace

SpdeConfig spde_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config", "must be a JSON object");
  static const char* const known[] = {"H", "T", "nt", "L", "nx", "c", "n_paths", "seed"};
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) throw ConfigError(item.key(), "unknown field");
  }
  SpdeConfig cfg;
  read_field(j, "H", cfg.hurst);
  read_field(j, "T", cfg.horizon);
  read_field(j, "nt", cfg.nt);
  read_field(j, "L", cfg.half_width);
  read_field(j, "nx", cfg.nx);
  read_field(j, "c", cfg.diffusivity);
  read_field(j, "n_paths", cfg.n_paths);
  read_field(j, "seed", cfg.seed);
  return cfg;
}

nlohmann::json to_json(const SpdeConfig& cfg) {
  return {{"H", cfg.hurst},   {"T", cfg.horizon},         {"nt", cfg.nt},
          {"L", cfg.half_width}, {"nx", cfg.nx},          {"c", cfg.diffusivity},
          {"n_paths", cfg.n_paths}, {"seed", cfg.seed}};
}

Eigen::MatrixXd fbm_increment_gram(double hurst, int nt, double dt) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw std::domain_error("H must lie in (0, 1)");
  if (nt < 0 || !(dt > 0.0)) throw std::domain_error("need nt >= 0 and dt > 0");
  const double h2 = 2.0 * hurst;
  const double scale = 0.5 * std::pow(dt, h2);
  Eigen::MatrixXd g(nt, nt);
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nt; ++j) {
      const double k = std::abs(i - j);
      g(i, j) = scale * (std::pow(k + 1, h2) + std::pow(std::abs(k - 1), h2) - 2.0 * std::pow(k, h2));
    }
  }
  return g;
}

SpdeSimulator::SpdeSimulator(SpdeConfig cfg) : cfg_(cfg) {
  cfg_.validate();
  chol_ = factorize(fbm_increment_gram(cfg_.hurst, cfg_.nt, cfg_.dt())).lower;
}

void SpdeSimulator::draw_standard(std::size_t path, Eigen::MatrixXd& z) const {
  z.resize(cfg_.nt, cfg_.nx);
  StreamRng rng(cfg_.seed, path);
  std::normal_distribution<double> normal;
  // column-major: all time steps of cell 0, then cell 1, ...
  for (Eigen::Index k = 0; k < z.size(); ++k) z.data()[k] = normal(rng);
}

NoiseField SpdeSimulator::sample_noise_field(std::size_t path) const {
  Eigen::MatrixXd z;
  draw_standard(path, z);
  NoiseField field;
  field.dt = cfg_.dt();
  field.dx = cfg_.dx();
  field.xi = chol_.triangularView<Eigen::Lower>() * z;
  field.xi *= std::sqrt(field.dx);
  return field;
}

Eigen::MatrixXd SpdeSimulator::heat_weights(int m, double x) const {
  if (m < 0 || m > cfg_.nt) throw std::out_of_range("time index outside the grid");
  const double dt = cfg_.dt();
  const double dx = cfg_.dx();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(cfg_.nt, cfg_.nx);
  for (int i = 0; i < m; ++i) {
    const double lag = cfg_.time(m) - (i + 0.5) * dt;
    for (int j = 0; j < cfg_.nx; ++j) {
      const double a = -cfg_.half_width + j * dx;
      w(i, j) = heat_cell_integral(cfg_.diffusivity, lag, x, a, a + dx) / dx;
    }
  }
  return w;
}

double SpdeSimulator::mild_value(const NoiseField& field, int m, double x) const {
  if (field.xi.rows() != cfg_.nt || field.xi.cols() != cfg_.nx) {
    throw std::invalid_argument("noise field shape does not match the configuration");
  }
  return (heat_weights(m, x).array() * field.xi.array()).sum();
}

// U_m = <W_m, sqrt(dx) L Z> = <sqrt(dx) L^T W_m, Z>.
Eigen::MatrixXd SpdeSimulator::projection(int m, double x) const {
  Eigen::MatrixXd p = chol_.transpose().triangularView<Eigen::Upper>() * heat_weights(m, x);
  p *= std::sqrt(cfg_.dx());
  return p;
}

Eigen::MatrixXd SpdeSimulator::scheme_cov(const std::vector<int>& time_indices, double x) const {
  const std::size_t k = time_indices.size();
  std::vector<Eigen::MatrixXd> proj;
  for (int m : time_indices) proj.push_back(projection(m, x));
  Eigen::MatrixXd out(k, k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      out(a, b) = out(b, a) = (proj[a].array() * proj[b].array()).sum();
    }
  }
  return out;
}

int SpdeSimulator::time_index(double t) const {
  const double pos = t / cfg_.dt();
  const long i = std::lround(pos);
  if (!(t > 0.0) || i < 1 || i > cfg_.nt || std::abs(i * cfg_.dt() - t) > 1e-9 * cfg_.horizon) {
    throw ConfigError("times", "time " + std::to_string(t) + " is not a positive grid time");
  }
  return static_cast<int>(i);
}

Eigen::MatrixXd SpdeSimulator::sample_solution(const std::vector<int>& time_indices, double x,
                                               unsigned workers) const {
  std::vector<Eigen::MatrixXd> proj;
  for (int m : time_indices) proj.push_back(projection(m, x));
  const auto k = static_cast<Eigen::Index>(time_indices.size());
  Eigen::MatrixXd out(static_cast<Eigen::Index>(cfg_.n_paths), k);
  parallel_for(cfg_.n_paths, workers, [&](std::size_t begin, std::size_t end) {
    Eigen::MatrixXd z;
    for (std::size_t p = begin; p < end; ++p) {
      draw_standard(p, z);
      for (Eigen::Index a = 0; a < k; ++a) {
        out(static_cast<Eigen::Index>(p), a) = (proj[a].array() * z.array()).sum();
      }
    }
  });
  return out;
}

std::vector<McRow> MCReport::rows() const {
  std::vector<McRow> out;
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (std::size_t j = i; j < times.size(); ++j) {
      const auto a = static_cast<Eigen::Index>(i);
      const auto b = static_cast<Eigen::Index>(j);
      const double t = std::max(times[i], times[j]);
      const double s = std::min(times[i], times[j]);
      out.push_back({t, s, estimate(a, b), std_err(a, b), n});
    }
  }
  return out;
}

MCReport mild_mc(const SpdeConfig& cfg, const std::vector<double>& eval_times, double x,
                 unsigned workers) {
  SpdeSimulator sim(cfg);
  if (!(std::abs(x) <= cfg.half_width / 2.0)) throw ConfigError("x", "must satisfy |x| <= L/2");
  std::vector<int> idx;
  for (double t : eval_times) idx.push_back(sim.time_index(t));

  const Eigen::MatrixXd u = sim.sample_solution(idx, x, workers);
  const auto n = u.rows();
  const auto k = u.cols();
  MCReport r;
  r.config = cfg;
  r.x = x;
  r.times = eval_times;
  r.n = static_cast<std::size_t>(n);
  r.estimate.resize(k, k);
  r.std_err.resize(k, k);
  // The solution is centred, so second moments are plain means of products.
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = a; b < k; ++b) {
      const Eigen::ArrayXd prod = u.col(a).array() * u.col(b).array();
      const double mean = prod.mean();
      const double var = (prod - mean).square().sum() / static_cast<double>(n - 1);
      r.estimate(a, b) = r.estimate(b, a) = mean;
      r.std_err(a, b) = r.std_err(b, a) = std::sqrt(var / static_cast<double>(n));
    }
  }
  for (Eigen::Index a = 0; a < k; ++a) {
    const Eigen::ArrayXd c = u.col(a).array() - u.col(a).mean();
    const double m2 = c.square().mean();
    const double m3 = c.cube().mean();
    const double m4 = c.square().square().mean();
    r.skewness.push_back(m3 / std::pow(m2, 1.5));
    r.excess_kurtosis.push_back(m4 / (m2 * m2) - 3.0);
  }
  r.skewness_se = std::sqrt(6.0 / static_cast<double>(n));
  r.kurtosis_se = std::sqrt(24.0 / static_cast<double>(n));
  return r;
}

}  // namespace fracheat
