#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "fracheat/quadrature.hpp"

namespace fracheat {

double solution_integrand(double u, double v, double t, double s, const ModelParams& p) {
  const double q = 2.0 * p.hurst() - 2.0;
  const double e = -0.5 * p.dim();
  return std::pow(std::abs(u - v), q) * std::pow((t + s) - (u + v), e);
}

namespace {

struct Level {
  int outer_nodes;
  int grading_levels;
};

constexpr std::array<Level, 7> kLevels{{{12, 8}, {16, 12}, {20, 16}, {24, 20}, {32, 26},
                                        {40, 32}, {48, 40}}};
constexpr int kInnerNodes = 16;

class CornerDuffy {
 public:
  CornerDuffy(double t, double s, const ModelParams& p)
      : t_(t), s_(s), gap_(t - s), q_(2.0 * p.hurst() - 2.0), e_(-0.5 * p.dim()) {}

  // Integrand in corner coordinates: u = t - rho xi, v = s - rho (1 - xi),
  // so (t+s)-(u+v) = rho and u - v = (t-s) + rho (1 - 2 xi) = 2 rho (xi_star - xi),
  // Jacobian rho. `offset` is xi_star - xi, carried separately so that points
  // next to the diagonal keep full relative accuracy.
  double mapped(double rho, double offset) const {
    return std::pow(std::abs(2.0 * rho * offset), q_) * std::pow(rho, e_) * rho;
  }

  // Inner integral over xi at fixed rho.
  double inner(double rho) const {
    const double lo = std::max(0.0, 1.0 - s_ / rho);
    const double hi = std::min(1.0, t_ / rho);
    if (!(hi > lo)) return 0.0;
    const double xi_star = 0.5 * (1.0 + gap_ / rho);  // where the diagonal u = v is crossed
    if (xi_star >= hi) {
      // Diagonal outside the xi range: singular only through the gap xi_star - hi.
      const double gap = xi_star - hi;
      return integrate_gap_power(
          [&](double x) { return mapped(rho, gap + x) / std::pow(gap + x, q_); }, hi - lo, 0.0,
          gap, q_, kInnerNodes);
    }
    const auto smooth = [&](double x) { return mapped(rho, x) / std::pow(x, q_); };
    return integrate_on(smooth, 0.0, xi_star - lo, q_, 0.0, kInnerNodes) +
           integrate_on(smooth, 0.0, hi - xi_star, q_, 0.0, kInnerNodes);
  }

  double integrate(const Level& level) const {
    const double total = t_ + s_;
    std::vector<double> breaks{0.0, s_, t_, total};
    if (gap_ > 0.0) breaks.push_back(gap_);
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> unique;
    for (double b : breaks) {
      if (unique.empty() || b - unique.back() > 1e-14 * total) unique.push_back(b);
    }
    // Leading power of the outer integrand at rho -> 0.
    const double origin_exp = gap_ > 0.0 ? 1.0 + e_ : 1.0 + e_ + q_;
    auto g = [&](double rho) { return inner(rho); };
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < unique.size(); ++k) {
      const Endpoint left = k == 0 ? Endpoint::power(origin_exp) : Endpoint::graded();
      const Endpoint right =
          k + 2 == unique.size() ? Endpoint::power(q_ + 1.0) : Endpoint::graded();
      sum += integrate_segment(g, unique[k], unique[k + 1], left, right, level.outer_nodes,
                               level.grading_levels);
    }
    return sum;
  }

 private:
  double t_;
  double s_;
  double gap_;
  double q_;
  double e_;
};

}  // namespace

SingularIntegral integrate2d_singular(double t, double s, const ModelParams& p, double tol) {
  if (s > t) std::swap(t, s);
  SingularIntegral out;
  if (!(s > 0.0)) {
    out.converged = true;
    return out;
  }
  const CornerDuffy scheme(t, s, p);
  double previous = scheme.integrate(kLevels[0]);
  for (std::size_t k = 1; k < kLevels.size(); ++k) {
    const double current = scheme.integrate(kLevels[k]);
    out.value = current;
    out.error_estimate = std::abs(current - previous);
    out.refinements = static_cast<int>(k);
    if (out.error_estimate <= tol * std::abs(current)) {
      out.converged = true;
      return out;
    }
    previous = current;
  }
  return out;
}

}  // namespace fracheat
