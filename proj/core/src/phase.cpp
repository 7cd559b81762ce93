#include "dmkdv/phase.hpp"

#include <cmath>
#include <sstream>

#include "dmkdv/errors.hpp"

namespace dmkdv {

namespace {

void check_index(int j) {
  if (j < 1 || j > 4) throw DomainError("stationary point index must be in 1..4");
}

double sign_pow(int j) { return (j % 2 == 0) ? 1.0 : -1.0; }

cplx stationary_point(const RayParams& ray, int j) {
  const double v = ray.v();
  const cplx a(0.5 * std::sqrt(2.0 + v), -0.5 * std::sqrt(2.0 - v));
  switch (j) {
    case 1: return a;
    case 2: return std::conj(a);
    case 3: return -a;
    default: return -std::conj(a);
  }
}

}  // namespace

cplx phase_at(cplx z, const RayParams& ray) {
  if (z == cplx(0.0)) throw DomainError("phase is singular at z = 0");
  const cplx z2 = z * z;
  return 0.5 * ray.t * (z2 - 1.0 / z2) - static_cast<double>(ray.n) * std::log(z);
}

cplx phase_derivative(cplx z, const RayParams& ray) {
  if (z == cplx(0.0)) throw DomainError("phase is singular at z = 0");
  return ray.t * (z + 1.0 / (z * z * z)) - static_cast<double>(ray.n) / z;
}

cplx phase_second_derivative_direct(cplx z, const RayParams& ray) {
  if (z == cplx(0.0)) throw DomainError("phase is singular at z = 0");
  const cplx z2 = z * z;
  return ray.t * (1.0 - 3.0 / (z2 * z2)) + static_cast<double>(ray.n) / z2;
}

StationarySet stationary_points(const RayParams& ray, double margin) {
  if (!(ray.t > 0.0)) throw DomainError("time must be positive");
  const double v = ray.v();
  if (2.0 - std::abs(v) < margin) {
    std::ostringstream msg;
    msg << "ray v = " << v << " is within " << margin << " of the merging points v = +-2";
    throw MergingPointsError(msg.str());
  }
  StationarySet set;
  set.ray = ray;
  for (int j = 1; j <= 4; ++j) {
    const auto k = static_cast<std::size_t>(j - 1);
    set.points[k] = stationary_point(ray, j);
    set.phi_dd[k] = phase_second_derivative(ray, j);
    set.beta[k] = scaling_factor(ray, j);
  }
  set.theta0 = -std::arg(set.points[0]);
  return set;
}

cplx phase_second_derivative(const RayParams& ray, int j) {
  check_index(j);
  const double n = static_cast<double>(ray.n);
  const double root = std::sqrt(4.0 * ray.t * ray.t - n * n);
  const cplx s = stationary_point(ray, j);
  return sign_pow(j) * 2.0 * cplx(0.0, 1.0) / (s * s) * root;
}

cplx scaling_factor(const RayParams& ray, int j) {
  check_index(j);
  const double n = static_cast<double>(ray.n);
  const double scale = 0.5 * std::pow(4.0 * ray.t * ray.t - n * n, -0.25);
  return sign_pow(j) * scale * cplx(0.0, 1.0) * stationary_point(ray, j);
}

}  // namespace dmkdv
