#include "fracheat/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace fracheat {
namespace {

// Jacobi polynomial P_n^{(a,b)}(x) and P_{n-1}, weight (1-x)^a (1+x)^b.
std::pair<double, double> jacobi_pair(int n, double a, double b, double x) {
  double p_prev = 1.0;
  double p = 0.5 * (a - b + (a + b + 2.0) * x);
  if (n == 1) return {p, p_prev};
  for (int k = 2; k <= n; ++k) {
    const double ab = a + b;
    const double c = 2.0 * k + ab;
    const double a1 = 2.0 * k * (k + ab) * (c - 2.0);
    const double a2 = (c - 1.0) * (a * a - b * b);
    const double a3 = (c - 2.0) * (c - 1.0) * c;
    const double a4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c;
    const double next = ((a2 + a3 * x) * p - a4 * p_prev) / a1;
    p_prev = p;
    p = next;
  }
  return {p, p_prev};
}

// d/dx P_n from (2n+a+b)(1-x^2) P_n' = n[(a-b) - (2n+a+b)x] P_n + 2(n+a)(n+b) P_{n-1}.
double jacobi_derivative(int n, double a, double b, double x, double p, double p_prev) {
  const double c = 2.0 * n + a + b;
  return (n * ((a - b) - c * x) * p + 2.0 * (n + a) * (n + b) * p_prev) / (c * (1.0 - x * x));
}

}  // namespace

QuadratureRule jacobi_rule(int n, double left_exp, double right_exp) {
  if (n < 1) throw std::domain_error("quadrature rule needs at least one node");
  if (!(left_exp > -1.0) || !(right_exp > -1.0)) {
    throw std::domain_error("Jacobi weight exponents must exceed -1 (non-integrable weight)");
  }
  // Classical convention: a multiplies (1-x), b multiplies (1+x).
  const double a = right_exp;
  const double b = left_exp;
  const double ab = a + b;

  // Golub-Welsch for starting values.
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) {
    if (k == 0) {
      diag(k) = (b - a) / (ab + 2.0);
    } else {
      const double c = 2.0 * k + ab;
      diag(k) = (b * b - a * a) / (c * (c + 2.0));
    }
  }
  for (int k = 1; k < n; ++k) {
    const double c = 2.0 * k + ab;
    double v;
    if (k == 1) {
      v = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      v = 4.0 * k * (k + a) * (k + b) * (k + ab) / (c * c * (c + 1.0) * (c - 1.0));
    }
    sub(k - 1) = std::sqrt(v);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("Jacobi matrix eigenvalue solve failed");
  }

  const double log_const = std::lgamma(n + a + 1.0) + std::lgamma(n + b + 1.0) -
                           std::lgamma(n + ab + 1.0) - std::lgamma(n + 1.0) +
                           (ab + 1.0) * std::log(2.0);

  const double moment = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                                 std::lgamma(b + 1.0) - std::lgamma(ab + 2.0));
  constexpr double kLargeWeight = 1e-3;

  QuadratureRule rule;
  rule.left_exp = left_exp;
  rule.right_exp = right_exp;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = solver.eigenvalues()(i);
    double dp = 0.0;
    for (int it = 0; it < 3; ++it) {
      auto [p, p_prev] = jacobi_pair(n, a, b, x);
      dp = jacobi_derivative(n, a, b, x, p, p_prev);
      const double step = p / dp;
      x -= step;
      if (std::abs(step) < 1e-17) break;
    }
    auto [p, p_prev] = jacobi_pair(n, a, b, x);
    dp = jacobi_derivative(n, a, b, x, p, p_prev);
    rule.nodes[i] = x;
    // The closed form is accurate in relative terms for small weights but
    // inherits the rounding of x through 1 - x^2 next to a singular endpoint;
    // there the weight is large and the eigenvector form is accurate.
    const double closed = std::exp(log_const) / ((1.0 - x * x) * dp * dp);
    const double v0 = solver.eigenvectors()(0, i);
    const double vector_form = moment * v0 * v0;
    rule.weights[i] = vector_form > kLargeWeight * moment ? vector_form : closed;
  }
  return rule;
}

const QuadratureRule& cached_jacobi_rule(int n, double left_exp, double right_exp) {
  using Key = std::tuple<int, double, double>;
  static std::mutex mutex;
  static std::map<Key, std::unique_ptr<QuadratureRule>> cache;
  const Key key{n, left_exp, right_exp};
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_unique<QuadratureRule>(jacobi_rule(n, left_exp, right_exp)))
             .first;
  }
  return *it->second;
}

}  // namespace fracheat
