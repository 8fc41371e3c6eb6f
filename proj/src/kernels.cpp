#include "fracheat/kernels.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace fracheat {
namespace {

void require_nonnegative(double t, double s) {
  if (t < 0.0 || s < 0.0 || std::isnan(t) || std::isnan(s)) {
    throw std::domain_error("kernel times must be non-negative");
  }
}

// Orders (t, s) so that t >= s.
std::pair<double, double> ordered(double t, double s) {
  require_nonnegative(t, s);
  return t >= s ? std::pair{t, s} : std::pair{s, t};
}

void require_open_half_one(double hurst) {
  if (!(hurst > 0.5 && hurst < 1.0)) throw std::domain_error("Hurst index must lie in (1/2, 1)");
}

// Integral over [0, s] of (s-a)^endpoint_exp (t+a)^p: smooth apart from the
// weight at a = s.
double plus_term(double t, double s, double endpoint_exp, double p, int n) {
  return integrate_weighted([&](double a) { return std::pow(t + a, p); }, s, 0.0, endpoint_exp,
                            n);
}

// Integral over [0, s] of (s-a)^endpoint_exp (t-a)^p. For t close to s the
// second factor is nearly singular at a = s; the interval is split at s/2 and
// the upper half is written in x = s - a with the gap t - s made explicit.
double minus_term(double t, double s, double endpoint_exp, double p, int n) {
  if (!(s > 0.0)) return 0.0;
  const double half = 0.5 * s;
  const double lower = integrate_on(
      [&](double a) { return std::pow(s - a, endpoint_exp) * std::pow(t - a, p); }, 0.0, half, 0.0,
      0.0, n);
  const double upper =
      integrate_gap_power([](double) { return 1.0; }, half, endpoint_exp, t - s, p, n);
  return lower + upper;
}

}  // namespace

double bifbm_cov(double hurst, double k, double t, double s) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw std::domain_error("bifBm needs H in (0, 1)");
  if (!(k > 0.0 && k <= 1.0)) throw std::domain_error("bifBm needs K in (0, 1]");
  require_nonnegative(t, s);
  const double two_h = 2.0 * hurst;
  return std::pow(2.0, -k) *
         (std::pow(std::pow(t, two_h) + std::pow(s, two_h), k) - std::pow(std::abs(t - s), two_h * k));
}

double swanson_cov(double t, double s) {
  require_nonnegative(t, s);
  return (std::sqrt(t + s) - std::sqrt(std::abs(t - s))) * std::numbers::inv_sqrtpi /
         std::numbers::sqrt2;
}

double noise_cov(double hurst, double t, double s, double x, double y) {
  require_nonnegative(t, s);
  const double two_h = 2.0 * hurst;
  return 0.5 * (std::pow(t, two_h) + std::pow(s, two_h) - std::pow(std::abs(t - s), two_h)) *
         std::min(x, y);
}

OracleValue solution_cov_oracle(const ModelParams& p, double t, double s, double tol) {
  require_nonnegative(t, s);
  const SingularIntegral integral = integrate2d_singular(t, s, p, tol);
  // 2 kappa = 1/sqrt(2 pi): the normalization under which the decomposition
  // below and the H -> 1/2 white-noise limit both hold.
  const double scale = 2.0 * kKappa * constants(p).alpha_h;
  return {scale * integral.value, scale * integral.error_estimate, integral.converged};
}

double lead_term(const ModelParams& p, double t, double s) {
  require_nonnegative(t, s);
  const double exponent = 2.0 * p.hurst() - 0.5 * p.dim();
  return constants(p).c0_sq * (std::pow(t + s, exponent) - std::pow(std::abs(t - s), exponent));
}

double r1(const ModelParams& p, double t, double s, int nodes) {
  std::tie(t, s) = ordered(t, s);
  if (!(s > 0.0)) return 0.0;
  const ModelConstants c = constants(p);
  const double q = 2.0 * p.hurst() - 2.0;
  const double w = 1.0 - 0.5 * p.dim();  // exponent of the integrated heat factor
  const double gap = t - s;
  const auto one = [](double) { return 1.0; };

  const double a_far =
      integrate_weighted([&](double a) { return std::pow(t + s - a, w); }, s, q, 0.0, nodes);
  const double a_near = integrate_gap_power(one, s, q, gap, w, nodes);
  const double b_plus =
      integrate_weighted([&](double a) { return std::pow(t + a, q); }, s, 0.0, w, nodes);
  const double b_minus = integrate_gap_power(one, s, w, gap, q, nodes);
  return c.kappa * c.alpha_h * c.c_d * (a_far - a_near - (b_plus + b_minus));
}

double rx(double hurst, double t, double s, IntegralForm form, int nodes) {
  require_open_half_one(hurst);
  std::tie(t, s) = ordered(t, s);
  if (!(s > 0.0)) return 0.0;
  if (form == IntegralForm::primary) {
    const double alpha = hurst * (2.0 * hurst - 1.0);
    const double q = 2.0 * hurst - 2.0;
    return 2.0 * kKappa * alpha *
           (plus_term(t, s, q, 0.5, nodes) - minus_term(t, s, q, 0.5, nodes));
  }
  const double e = 2.0 * hurst - 1.0;
  return kKappa * hurst * (plus_term(t, s, e, -0.5, nodes) + minus_term(t, s, e, -0.5, nodes));
}

double ry(double hurst, double t, double s, IntegralForm form, int nodes) {
  require_open_half_one(hurst);
  std::tie(t, s) = ordered(t, s);
  if (!(s > 0.0)) return 0.0;
  if (form == IntegralForm::primary) {
    const double alpha = hurst * (2.0 * hurst - 1.0);
    const double q = 2.0 * hurst - 2.0;
    return 2.0 * kKappa * alpha *
           (plus_term(t, s, 0.5, q, nodes) + minus_term(t, s, 0.5, q, nodes));
  }
  const double e = 2.0 * hurst - 1.0;
  return kKappa * hurst * (plus_term(t, s, -0.5, e, nodes) - minus_term(t, s, -0.5, e, nodes));
}

RzParts rz_parts(double hurst, double t, double s, int nodes) {
  if (!(hurst > 0.75 && hurst < 1.0)) {
    throw std::domain_error("R^Z is defined for d = 3, which needs H in (3/4, 1)");
  }
  std::tie(t, s) = ordered(t, s);
  if (!(s > 0.0)) return {0.0, 0.0};
  const double alpha = hurst * (2.0 * hurst - 1.0);
  const double q = 2.0 * hurst - 2.0;
  const double scale = 2.0 * kKappa * alpha;
  return {scale * (minus_term(t, s, q, -0.5, nodes) - plus_term(t, s, q, -0.5, nodes)),
          scale * (plus_term(t, s, -0.5, q, nodes) + minus_term(t, s, -0.5, q, nodes))};
}

double rz(double hurst, double t, double s, int nodes) {
  const RzParts parts = rz_parts(hurst, t, s, nodes);
  return parts.first + parts.second;
}

double solution_cov(const ModelParams& p, double t, double s) {
  std::tie(t, s) = ordered(t, s);
  if (!(s > 0.0)) return 0.0;
  return lead_term(p, t, s) + r1(p, t, s);
}

// ---------------------------------------------------------------------------

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[96];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

const char* form_name(IntegralForm f) { return f == IntegralForm::primary ? "primary" : "ibp"; }

}  // namespace

void validate(const KernelSpec& spec) {
  std::visit(Overloaded{
                 [](const kernel::BifBm& k) { (void)bifbm_cov(k.hurst, k.k, 1.0, 1.0); },
                 [](const kernel::Swanson&) {},
                 [](const kernel::Noise& k) {
                   if (!(k.hurst > 0.0 && k.hurst < 1.0)) {
                     throw std::domain_error("noise needs H in (0, 1)");
                   }
                 },
                 [](const kernel::SolutionOracle& k) {
                   if (!(k.tol > 0.0)) throw std::domain_error("oracle tolerance must be > 0");
                 },
                 [](const kernel::SolutionDecomposed&) {}, [](const kernel::LeadTerm&) {},
                 [](const kernel::LeadShape& k) {
                   if (!(constants(k.params).c0_sq > 0.0)) {
                     throw std::domain_error("lead shape needs a positive c0_sq (d = 1)");
                   }
                 },
                 [](const kernel::R1&) {},
                 [](const kernel::RX& k) { require_open_half_one(k.hurst); },
                 [](const kernel::RY& k) { require_open_half_one(k.hurst); },
                 [](const kernel::RZ& k) { (void)rz_parts(k.hurst, 0.0, 0.0); },
             },
             spec);
}

double evaluate(const KernelSpec& spec, double t, double s) {
  return std::visit(
      Overloaded{
          [&](const kernel::BifBm& k) { return bifbm_cov(k.hurst, k.k, t, s); },
          [&](const kernel::Swanson&) { return swanson_cov(t, s); },
          [&](const kernel::Noise& k) { return noise_cov(k.hurst, t, s, k.x, k.x); },
          [&](const kernel::SolutionOracle& k) {
            const OracleValue v = solution_cov_oracle(k.params, t, s, k.tol);
            if (!v.converged) throw std::runtime_error("solution oracle did not converge");
            return v.value;
          },
          [&](const kernel::SolutionDecomposed& k) { return solution_cov(k.params, t, s); },
          [&](const kernel::LeadTerm& k) { return lead_term(k.params, t, s); },
          [&](const kernel::LeadShape& k) {
            return lead_term(k.params, t, s) / constants(k.params).c0_sq;
          },
          [&](const kernel::R1& k) { return r1(k.params, t, s); },
          [&](const kernel::RX& k) { return rx(k.hurst, t, s, k.form); },
          [&](const kernel::RY& k) { return ry(k.hurst, t, s, k.form); },
          [&](const kernel::RZ& k) { return rz(k.hurst, t, s); },
      },
      spec);
}

std::string kernel_id(const KernelSpec& spec) {
  return std::visit(
      Overloaded{
          [](const kernel::BifBm& k) { return fmt("bifbm(H=%g,K=%g)", k.hurst, k.k); },
          [](const kernel::Swanson&) { return std::string("swanson"); },
          [](const kernel::Noise& k) { return fmt("noise(H=%g,x=%g)", k.hurst, k.x); },
          [](const kernel::SolutionOracle& k) {
            return fmt("solution_oracle(H=%g,d=%g)", k.params.hurst(), k.params.dim());
          },
          [](const kernel::SolutionDecomposed& k) {
            return fmt("solution(H=%g,d=%g)", k.params.hurst(), k.params.dim());
          },
          [](const kernel::LeadTerm& k) {
            return fmt("lead(H=%g,d=%g)", k.params.hurst(), k.params.dim());
          },
          [](const kernel::LeadShape& k) {
            return fmt("lead_shape(H=%g,d=%g)", k.params.hurst(), k.params.dim());
          },
          [](const kernel::R1& k) { return fmt("r1(H=%g,d=%g)", k.params.hurst(), k.params.dim()); },
          [](const kernel::RX& k) {
            return fmt("rx(H=%g,", k.hurst) + form_name(k.form) + ")";
          },
          [](const kernel::RY& k) {
            return fmt("ry(H=%g,", k.hurst) + form_name(k.form) + ")";
          },
          [](const kernel::RZ& k) { return fmt("rz(H=%g)", k.hurst); },
      },
      spec);
}

}  // namespace fracheat
