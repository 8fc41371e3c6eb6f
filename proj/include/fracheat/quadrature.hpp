// Gauss-Jacobi rules and weakly singular integration helpers.
//
// All integrals here have endpoint singularities whose exponents are known in
// closed form. They are absorbed into the weight of a Gauss-Jacobi rule rather
// than resolved by mesh refinement; near-singular endpoints (a singularity at a
// small distance outside the interval) are handled by geometric splitting.
#pragma once

#include <cmath>
#include <vector>

#include "fracheat/specfun.hpp"

namespace fracheat {

inline constexpr int kDefaultNodes = 128;

/// Gauss rule on (-1, 1) for the weight (1+x)^left_exp (1-x)^right_exp.
struct QuadratureRule {
  std::vector<double> nodes;    // strictly increasing
  std::vector<double> weights;  // all positive
  double left_exp = 0.0;
  double right_exp = 0.0;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Builds the n-point rule, exact for polynomials of degree <= 2n-1 against the
/// weight. Throws std::domain_error for n < 1 or an exponent <= -1.
QuadratureRule jacobi_rule(int n, double left_exp, double right_exp);

/// Thread-safe memoized jacobi_rule. The returned reference stays valid for
/// the lifetime of the program.
const QuadratureRule& cached_jacobi_rule(int n, double left_exp, double right_exp);

inline const QuadratureRule& legendre_rule(int n) { return cached_jacobi_rule(n, 0.0, 0.0); }

/// Integral of (x-lo)^left_exp (hi-x)^right_exp f(x) over [lo, hi].
template <class F>
double integrate_on(F&& f, double lo, double hi, double left_exp, double right_exp,
                    int n = kDefaultNodes) {
  if (!(hi > lo)) return 0.0;
  const QuadratureRule& rule = cached_jacobi_rule(n, left_exp, right_exp);
  const double half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    sum += rule.weights[i] * f(lo + half * (1.0 + rule.nodes[i]));
  }
  return std::pow(half, left_exp + right_exp + 1.0) * sum;
}

/// Integral over [0, s] of a^left_exp (s-a)^right_exp f(a). Returns 0 for
/// s <= 0 (an empty range).
template <class F>
double integrate_weighted(F&& f, double s, double left_exp, double right_exp,
                          int n = kDefaultNodes) {
  if (!(s > 0.0)) return 0.0;
  return integrate_on(f, 0.0, s, left_exp, right_exp, n);
}

/// Integral over [0, length] of x^endpoint_exp (gap + x)^gap_exp f(x), f smooth.
///
/// The second factor is singular at x = -gap. For gap == 0 the exponents are
/// merged into one Jacobi weight; otherwise [0, gap] carries the Jacobi weight
/// and the rest is split into pieces [gap 2^k, gap 2^(k+1)], each far enough
/// from both singular points for a Gauss-Legendre rule.
template <class F>
double integrate_gap_power(F&& f, double length, double endpoint_exp, double gap,
                           double gap_exp, int n = kDefaultNodes) {
  if (!(length > 0.0)) return 0.0;
  if (gap <= 0.0) {
    return integrate_on(f, 0.0, length, endpoint_exp + gap_exp, 0.0, n);
  }
  const double first = std::min(gap, length);
  double sum = integrate_on([&](double x) { return std::pow(gap + x, gap_exp) * f(x); }, 0.0,
                            first, endpoint_exp, 0.0, n);
  const int piece_nodes = std::min(n, 48);
  for (double lo = first; lo < length;) {
    const double hi = std::min(2.0 * lo, length);
    sum += integrate_on(
        [&](double x) { return std::pow(x, endpoint_exp) * std::pow(gap + x, gap_exp) * f(x); },
        lo, hi, 0.0, 0.0, piece_nodes);
    lo = hi;
  }
  return sum;
}

/// How an outer integral treats one endpoint of a segment.
struct Endpoint {
  enum class Kind { smooth, graded, power };
  Kind kind = Kind::smooth;
  double exponent = 0.0;  // used by Kind::power

  static Endpoint smooth() { return {}; }
  static Endpoint graded() { return {Kind::graded, 0.0}; }
  static Endpoint power(double e) { return {Kind::power, e}; }
};

/// Integral of f over [lo, hi] where f may have a singularity of the given
/// kind at each end. The segment is halved; a power endpoint puts a Jacobi
/// weight on its half (f is divided by the weight), a graded endpoint splits
/// its half geometrically with ratio 1/5 over `levels` levels.
template <class F>
double integrate_segment(F&& f, double lo, double hi, Endpoint left, Endpoint right, int n,
                         int levels) {
  if (!(hi > lo)) return 0.0;
  constexpr double kRatio = 0.2;
  const double mid = 0.5 * (lo + hi);
  auto half = [&](double a, double b, Endpoint at_end, bool end_is_left) {
    switch (at_end.kind) {
      case Endpoint::Kind::power: {
        const double e = at_end.exponent;
        if (end_is_left) {
          return integrate_on([&](double x) { return f(x) / std::pow(x - a, e); }, a, b, e, 0.0, n);
        }
        return integrate_on([&](double x) { return f(x) / std::pow(b - x, e); }, a, b, 0.0, e, n);
      }
      case Endpoint::Kind::graded: {
        double sum = 0.0;
        double width = b - a;
        double inner = end_is_left ? a : b;
        for (int k = 0; k < levels; ++k) {
          const double next = width * kRatio;
          if (end_is_left) {
            sum += integrate_on(f, inner + next, inner + width, 0.0, 0.0, n);
          } else {
            sum += integrate_on(f, inner - width, inner - next, 0.0, 0.0, n);
          }
          width = next;
        }
        sum += end_is_left ? integrate_on(f, inner, inner + width, 0.0, 0.0, n)
                           : integrate_on(f, inner - width, inner, 0.0, 0.0, n);
        return sum;
      }
      case Endpoint::Kind::smooth:
      default:
        return integrate_on(f, a, b, 0.0, 0.0, n);
    }
  };
  return half(lo, mid, left, true) + half(mid, hi, right, false);
}

/// Outcome of the two-dimensional oracle quadrature.
struct SingularIntegral {
  double value = 0.0;
  double error_estimate = 0.0;  // |difference| between the last two refinements
  bool converged = false;
  int refinements = 0;
};

/// Integrand of the solution covariance double integral,
/// |u-v|^(2H-2) ((t+s)-(u+v))^(-d/2).
double solution_integrand(double u, double v, double t, double s, const ModelParams& p);

/// Double integral of solution_integrand over [0,t] x [0,s].
///
/// The corner (t, s), where the second factor blows up, is collapsed by a
/// Duffy-type map (rho, xi) with u = t - rho xi, v = s - rho (1 - xi); the
/// inner xi-integral is split at the diagonal crossing and carries Jacobi
/// weights there, the outer rho-integral is graded towards every breakpoint.
/// The rule is refined until two successive estimates agree to tol relative;
/// if the refinement budget runs out the result is returned with
/// converged == false.
SingularIntegral integrate2d_singular(double t, double s, const ModelParams& p, double tol);

}  // namespace fracheat
