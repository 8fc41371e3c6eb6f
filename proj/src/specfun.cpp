#include "fracheat/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracheat {

ModelParams::ModelParams(double hurst, int dim) : hurst_(hurst), dim_(dim) {
  if (!(hurst > 0.5 && hurst < 1.0)) {
    throw std::domain_error("Hurst index must lie in (1/2, 1), got " + std::to_string(hurst));
  }
  if (dim != 1 && dim != 3) {
    throw std::domain_error("dimension must be 1 or 3, got " + std::to_string(dim));
  }
  if (!(dim < 4.0 * hurst)) {
    throw std::domain_error("solution has no finite second moment unless d < 4H (d=" +
                            std::to_string(dim) + ", H=" + std::to_string(hurst) + ")");
  }
}

bool ModelParams::admissible(double hurst, int dim) noexcept {
  return hurst > 0.5 && hurst < 1.0 && (dim == 1 || dim == 3) && dim < 4.0 * hurst;
}

double beta(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) {
    throw std::domain_error("beta requires positive arguments");
  }
  return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

ModelConstants constants(const ModelParams& p) {
  const double h = p.hurst();
  const double d = p.dim();
  ModelConstants c{};
  c.alpha_h = h * (2.0 * h - 1.0);
  c.c_d = 2.0 / (2.0 - d);
  c.kappa = kKappa;
  c.c0_sq = c.kappa * c.alpha_h * c.c_d * beta(2.0 * h - 1.0, 2.0 - d / 2.0);
  return c;
}

double heat_kernel(double c, double t, double x, int dim) {
  if (t <= 0.0) return 0.0;
  const double four_ct = 4.0 * c * t;
  return std::pow(std::numbers::pi * four_ct, -0.5 * dim) * std::exp(-x * x / four_ct);
}

double heat_cell_integral(double c, double t, double x, double a, double b) {
  if (!(t > 0.0)) throw std::domain_error("heat_cell_integral needs t > 0");
  if (!(a < b)) throw std::domain_error("heat_cell_integral needs a < b");
  const double scale = std::sqrt(4.0 * c * t);
  const double lo = (a - x) / scale;
  const double hi = (b - x) / scale;
  // Stay in the tail that keeps both terms small.
  if (lo > 0.0) return 0.5 * (std::erfc(lo) - std::erfc(hi));
  if (hi < 0.0) return 0.5 * (std::erfc(-hi) - std::erfc(-lo));
  return 0.5 * (std::erf(hi) - std::erf(lo));
}

}  // namespace fracheat
