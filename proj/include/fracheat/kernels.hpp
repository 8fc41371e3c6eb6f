// Covariance functions of the fractional-in-time heat equation and of the
// Gaussian processes in its decomposition.
//
// Every two-time kernel is symmetric; arguments are ordered internally so that
// t >= s, and every kernel vanishes when either argument is 0.
#pragma once

#include <string>
#include <variant>

#include "fracheat/quadrature.hpp"
#include "fracheat/specfun.hpp"

namespace fracheat {

/// Which of the two equivalent integral representations of R^X / R^Y is used.
/// `ibp` is the integrated-by-parts form.
enum class IntegralForm { primary, ibp };

double bifbm_cov(double hurst, double k, double t, double s);

/// Covariance of the white-noise (H = 1/2) solution, (sqrt(t+s) - sqrt|t-s|)/sqrt(2 pi).
double swanson_cov(double t, double s);

/// Fractional-in-time, white-in-space noise covariance in d = 1 (x, y >= 0).
double noise_cov(double hurst, double t, double s, double x, double y);

/// Oracle value of the solution covariance: the double integral evaluated by
/// integrate2d_singular, times alpha_H / sqrt(2 pi).
struct OracleValue {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
};
OracleValue solution_cov_oracle(const ModelParams& p, double t, double s, double tol = 1e-11);

/// c0_sq ((t+s)^(2H-d/2) - |t-s|^(2H-d/2)).
double lead_term(const ModelParams& p, double t, double s);

/// Remainder R1 of the decomposition, by one-dimensional singular quadrature.
double r1(const ModelParams& p, double t, double s, int nodes = kDefaultNodes);

double rx(double hurst, double t, double s, IntegralForm form = IntegralForm::ibp,
          int nodes = kDefaultNodes);
double ry(double hurst, double t, double s, IntegralForm form = IntegralForm::ibp,
          int nodes = kDefaultNodes);

/// The two non-negative summands of R^Z for t >= s; rz is their sum.
struct RzParts {
  double first;
  double second;
};
RzParts rz_parts(double hurst, double t, double s, int nodes = kDefaultNodes);
/// Covariance R1 for d = 3 written in the (s-a) arrangement. Requires H > 3/4.
double rz(double hurst, double t, double s, int nodes = kDefaultNodes);

/// Decomposed solution covariance lead_term + r1.
double solution_cov(const ModelParams& p, double t, double s);

// ---------------------------------------------------------------------------
// Kernel identifiers consumed by the Gram builder, the checks and the CLI.

namespace kernel {
struct BifBm { double hurst; double k; };
struct Swanson {};
struct Noise { double hurst; double x = 1.0; };
struct SolutionOracle { ModelParams params; double tol = 1e-11; };
struct SolutionDecomposed { ModelParams params; };
struct LeadTerm { ModelParams params; };
/// Lead term divided by its coefficient c0_sq; requires c0_sq > 0 (d = 1).
struct LeadShape { ModelParams params; };
struct R1 { ModelParams params; };
struct RX { double hurst; IntegralForm form = IntegralForm::ibp; };
struct RY { double hurst; IntegralForm form = IntegralForm::ibp; };
struct RZ { double hurst; };
}  // namespace kernel

using KernelSpec =
    std::variant<kernel::BifBm, kernel::Swanson, kernel::Noise, kernel::SolutionOracle,
                 kernel::SolutionDecomposed, kernel::LeadTerm, kernel::LeadShape, kernel::R1,
                 kernel::RX, kernel::RY, kernel::RZ>;

/// Checks parameter ranges; throws std::domain_error.
void validate(const KernelSpec& spec);

double evaluate(const KernelSpec& spec, double t, double s);

/// Short stable identifier, e.g. "rx(H=0.75,ibp)".
std::string kernel_id(const KernelSpec& spec);

}  // namespace fracheat
