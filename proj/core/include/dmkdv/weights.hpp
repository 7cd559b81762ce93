#pragma once

#include <array>
#include <complex>
#include <functional>

#include "dmkdv/phase.hpp"
#include "dmkdv/quadrature.hpp"
#include "dmkdv/scattering.hpp"

namespace dmkdv {

/// Arc of the unit circle traversed from start to end angle (unwrapped, so
/// the direction of travel is the sign of end - start). Central angle < pi.
struct ArcSpec {
  double theta_start = 0.0;
  double theta_end = 0.0;

  cplx start() const { return std::polar(1.0, theta_start); }
  cplx end() const { return std::polar(1.0, theta_end); }
  double central_angle() const { return std::abs(theta_end - theta_start); }
  /// True when z lies on the circle strictly between the endpoints.
  bool contains_interior(cplx z, double tol = 1e-12) const;
};

/// Throws DomainError unless the central angle lies in (0, pi).
ArcSpec make_arc(double theta_start, double theta_end);

/// The arcs carrying the jump of delta for a ray: S1 -> S2 through z = 1 and
/// S3 -> S4 through z = -1.
std::array<ArcSpec, 2> jump_arcs(const StationarySet& set);
/// T_j -> S_j with T_1 = T_2 = 1, T_3 = T_4 = -1.
ArcSpec local_arc(const StationarySet& set, int j);

/// Per-ray coefficients entering the leading term. Arrays are indexed j - 1.
/// nu_j = -log(1 - |r(S_j)|^2) / 2pi; chi_at_S and hat_delta_at_S are chi_j and
/// delta / delta_j at S_j. The functions l_j themselves are never evaluated.
struct CoefficientSet {
  std::array<double, 4> nu{};
  std::array<cplx, 4> r_at_S{};
  std::array<cplx, 4> chi_at_S{};
  std::array<cplx, 4> hat_delta_at_S{};
  std::array<cplx, 4> delta_j0{};
  cplx delta_at_zero{1.0};
};

/// log(1 - |r(z)|^2). Throws ReflectionTooLargeError if |r| >= 1 - 1e-8.
double log_density(const ReflectionEvaluator& r, cplx z);

using CircleDensity = std::function<double(cplx)>;

/// (1/2 pi i) int_arc density(tau) dtau / (tau - z), in the angle parameter.
/// Throws DomainError if z lies on the open arc.
cplx cauchy_arc_integral(const CircleDensity& density, const ArcSpec& arc, cplx z,
                         const QuadratureOptions& opt = {});

/// delta(z) = exp(-(C_{S1S2} + C_{S3S4})[log(1 - |r|^2)](z)).
cplx delta_at(const ReflectionEvaluator& r, const StationarySet& set, cplx z,
              const QuadratureOptions& opt = {});

/// delta_j(z) = exp((-1)^{j-1} C_{T_j S_j}[log(1 - |r|^2)](z)).
cplx delta_factor(const ReflectionEvaluator& r, const StationarySet& set, int j, cplx z,
                  const QuadratureOptions& opt = {});

double nu_at(const ReflectionEvaluator& r, const StationarySet& set, int j);

/// chi_j(S_j); the integrand has a removable singularity at tau = S_j and is
/// integrated with geometric refinement toward that end.
cplx chi_at_stationary(const ReflectionEvaluator& r, const StationarySet& set, int j,
                       const QuadratureOptions& opt = {});

/// prod_{k != j} delta_k(S_j).
cplx hat_delta_at_stationary(const ReflectionEvaluator& r, const StationarySet& set, int j,
                             const QuadratureOptions& opt = {});

/// delta_j^0 = S_j^n (beta_j / (S_j - T_j))^{s i nu_j} exp(s chi_j(S_j) - (t/2)(S_j^2 - S_j^{-2})) hat_delta_j(S_j)
/// with s = (-1)^{j-1}; complex powers on the principal branch.
cplx delta_j0(const StationarySet& set, double nu, cplx chi, cplx hat_delta, int j);

/// Everything above for one ray.
CoefficientSet compute_coefficients(const ReflectionEvaluator& r, const StationarySet& set,
                                    const QuadratureOptions& opt = {});

/// x^{i nu} := exp(i nu Log x).
cplx complex_power_i(cplx x, double nu);

}  // namespace dmkdv
