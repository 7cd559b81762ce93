#include "dmkdv/weights.hpp"

#include <cmath>
#include <numbers>

#include "dmkdv/errors.hpp"

namespace dmkdv {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

double parity(int j) { return (j % 2 == 1) ? 1.0 : -1.0; }  // (-1)^{j-1}

void check_index(int j) {
  if (j < 1 || j > 4) throw DomainError("stationary point index must be in 1..4");
}

// (1/2 pi i) * i e^{i theta} / (e^{i theta} - z) = e^{i theta} / (2 pi (e^{i theta} - z))
cplx cauchy_kernel(double theta, cplx z) {
  const cplx tau = std::polar(1.0, theta);
  return tau / (2.0 * kPi * (tau - z));
}

}  // namespace

bool ArcSpec::contains_interior(cplx z, double tol) const {
  if (std::abs(std::abs(z) - 1.0) > tol) return false;
  const double dir = theta_end >= theta_start ? 1.0 : -1.0;
  double d = std::remainder(std::arg(z) - theta_start, 2.0 * kPi) * dir;
  if (d < 0.0) d += 2.0 * kPi;
  return d > tol && d < central_angle() - tol;
}

ArcSpec make_arc(double theta_start, double theta_end) {
  ArcSpec arc{theta_start, theta_end};
  const double angle = arc.central_angle();
  if (!(angle > 0.0 && angle < kPi)) throw DomainError("arc central angle must lie in (0, pi)");
  return arc;
}

std::array<ArcSpec, 2> jump_arcs(const StationarySet& set) {
  const double th1 = std::arg(set.S(1));  // in (-pi/2, 0)
  return {make_arc(th1, -th1), make_arc(th1 + kPi, kPi - th1)};
}

ArcSpec local_arc(const StationarySet& set, int j) {
  check_index(j);
  const double th1 = std::arg(set.S(1));
  switch (j) {
    case 1: return make_arc(0.0, th1);
    case 2: return make_arc(0.0, -th1);
    case 3: return make_arc(kPi, kPi + th1);
    default: return make_arc(kPi, kPi - th1);
  }
}

double log_density(const ReflectionEvaluator& r, cplx z) {
  const double mod = std::abs(r(z));
  if (mod >= 1.0 - 1e-8) throw ReflectionTooLargeError("|r| reaches 1 on the unit circle");
  return std::log1p(-mod * mod);
}

cplx cauchy_arc_integral(const CircleDensity& density, const ArcSpec& arc, cplx z,
                         const QuadratureOptions& opt) {
  if (arc.contains_interior(z)) throw DomainError("Cauchy integral evaluated on its own arc");
  auto integrand = [&](double theta) {
    return density(std::polar(1.0, theta)) * cauchy_kernel(theta, z);
  };
  return integrate_adaptive(integrand, arc.theta_start, arc.theta_end, opt);
}

cplx delta_at(const ReflectionEvaluator& r, const StationarySet& set, cplx z,
              const QuadratureOptions& opt) {
  const CircleDensity density = [&](cplx tau) { return log_density(r, tau); };
  cplx exponent = 0.0;
  for (const ArcSpec& arc : jump_arcs(set)) exponent += cauchy_arc_integral(density, arc, z, opt);
  return std::exp(-exponent);
}

cplx delta_factor(const ReflectionEvaluator& r, const StationarySet& set, int j, cplx z,
                  const QuadratureOptions& opt) {
  const CircleDensity density = [&](cplx tau) { return log_density(r, tau); };
  return std::exp(parity(j) * cauchy_arc_integral(density, local_arc(set, j), z, opt));
}

double nu_at(const ReflectionEvaluator& r, const StationarySet& set, int j) {
  check_index(j);
  return -log_density(r, set.S(j)) / (2.0 * kPi);
}

cplx chi_at_stationary(const ReflectionEvaluator& r, const StationarySet& set, int j,
                       const QuadratureOptions& opt) {
  check_index(j);
  const cplx s = set.S(j);
  const double base = log_density(r, s);
  const ArcSpec arc = local_arc(set, j);
  auto integrand = [&](double theta) {
    const cplx tau = std::polar(1.0, theta);
    const double num = log_density(r, tau) - base;
    if (num == 0.0) return cplx(0.0);
    return num * cauchy_kernel(theta, s);
  };
  return integrate_clustered(integrand, arc.theta_start, arc.theta_end, opt);
}

cplx hat_delta_at_stationary(const ReflectionEvaluator& r, const StationarySet& set, int j,
                             const QuadratureOptions& opt) {
  check_index(j);
  cplx prod = 1.0;
  for (int k = 1; k <= 4; ++k)
    if (k != j) prod *= delta_factor(r, set, k, set.S(j), opt);
  return prod;
}

cplx complex_power_i(cplx x, double nu) { return std::exp(kI * nu * std::log(x)); }

cplx delta_j0(const StationarySet& set, double nu, cplx chi, cplx hat_delta, int j) {
  check_index(j);
  const auto k = static_cast<std::size_t>(j - 1);
  const cplx s = set.points[k];
  const double tj = j <= 2 ? 1.0 : -1.0;
  const double sign = parity(j);
  const double t = set.ray.t;
  // S_j^n is unimodular: use the polar form to keep it exact for large n.
  const cplx s_pow_n = std::polar(1.0, static_cast<double>(set.ray.n) * std::arg(s));
  const cplx power = complex_power_i(set.beta[k] / (s - tj), sign * nu);
  const cplx oscillation = std::exp(sign * chi - 0.5 * t * (s * s - 1.0 / (s * s)));
  return s_pow_n * power * oscillation * hat_delta;
}

CoefficientSet compute_coefficients(const ReflectionEvaluator& r, const StationarySet& set,
                                    const QuadratureOptions& opt) {
  CoefficientSet c;
  for (int j = 1; j <= 4; ++j) {
    const auto k = static_cast<std::size_t>(j - 1);
    c.r_at_S[k] = r(set.S(j));
    c.nu[k] = nu_at(r, set, j);
    c.chi_at_S[k] = chi_at_stationary(r, set, j, opt);
    c.hat_delta_at_S[k] = hat_delta_at_stationary(r, set, j, opt);
    c.delta_j0[k] = delta_j0(set, c.nu[k], c.chi_at_S[k], c.hat_delta_at_S[k], j);
  }
  c.delta_at_zero = delta_at(r, set, 0.0, opt);
  return c;
}

}  // namespace dmkdv
