#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace dmkdv {

using cplx = std::complex<double>;

/// Ray n = v t in the light cone.
struct RayParams {
  std::int64_t n = 0;
  double t = 1.0;

  double v() const { return static_cast<double>(n) / t; }
};

/// Stationary points of the phase and the local data attached to them.
/// Index 0..3 holds S_1..S_4 with S_1 = A, S_2 = conj(A), S_3 = -A, S_4 = -conj(A).
struct StationarySet {
  RayParams ray;
  std::array<cplx, 4> points{};
  /// -arg A
  double theta0 = 0.0;
  std::array<cplx, 4> phi_dd{};
  std::array<cplx, 4> beta{};

  const cplx& S(int j) const { return points[static_cast<std::size_t>(j - 1)]; }
};

/// Default distance kept from the merging points v = +-2.
inline constexpr double kDefaultMergingMargin = 0.05;

/// (t/2)(z^2 - z^{-2}) - n Log z with the principal logarithm.
cplx phase_at(cplx z, const RayParams& ray);
/// t (z + z^{-3}) - n / z
cplx phase_derivative(cplx z, const RayParams& ray);
/// t (1 - 3 z^{-4}) + n / z^2
cplx phase_second_derivative_direct(cplx z, const RayParams& ray);

/// A = (sqrt(2 + v) - i sqrt(2 - v)) / 2 and its three images.
/// Throws MergingPointsError when 2 - |v| < margin, DomainError for t <= 0.
StationarySet stationary_points(const RayParams& ray, double margin = kDefaultMergingMargin);

/// Closed form (-1)^j 2i S_j^{-2} sqrt(4t^2 - n^2), j = 1..4.
cplx phase_second_derivative(const RayParams& ray, int j);

/// beta_j = (1/2)(4t^2 - n^2)^{-1/4} i S_j (-1)^j, so that phi''(S_j) beta_j^2 = (-1)^{j+1} i/2.
cplx scaling_factor(const RayParams& ray, int j);

}  // namespace dmkdv
