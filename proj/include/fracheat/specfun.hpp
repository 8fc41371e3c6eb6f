// Special functions and model constants shared by every covariance kernel.
#pragma once

#include <numbers>

namespace fracheat {

/// Hurst index and spatial dimension of the fractional-in-time heat equation.
///
/// Only H in (1/2, 1) and d in {1, 3} with d < 4H are representable; d = 2
/// produces logarithmic terms and has no decomposition here.
class ModelParams {
 public:
  /// Throws std::domain_error when (H, d) is outside the admissible set.
  ModelParams(double hurst, int dim);

  double hurst() const noexcept { return hurst_; }
  int dim() const noexcept { return dim_; }

  static bool admissible(double hurst, int dim) noexcept;

 private:
  double hurst_;
  int dim_;
};

/// 1/(2 sqrt(2 pi)), the prefactor carried by every kernel.
inline constexpr double kKappa = 0.5 * std::numbers::inv_sqrtpi / std::numbers::sqrt2;

struct ModelConstants {
  double alpha_h;  // H(2H-1)
  double c_d;      // 2/(2-d)
  double kappa;
  double c0_sq;    // kappa * alpha_h * c_d * B(2H-1, 2-d/2); negative for d = 3
};

ModelConstants constants(const ModelParams& p);

/// Beta function through log-gamma; x, y > 0 or std::domain_error.
double beta(double x, double y);

/// Heat kernel of u_t = c * Laplacian(u) at distance |x| in dimension d.
/// Zero for t <= 0.
double heat_kernel(double c, double t, double x, int dim);

/// Integral of the one-dimensional heat kernel centred at x over the cell
/// [a, b]; infinite ends are allowed. t <= 0 or a >= b is a domain error.
double heat_cell_integral(double c, double t, double x, double a, double b);

}  // namespace fracheat
