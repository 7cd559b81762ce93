#include "dmkdv/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dmkdv/errors.hpp"

namespace dmkdv {

namespace {

constexpr double kCircleTolerance = 1e-12;

// z^m via polar form; exact modulus on the circle for any site index.
cplx ipow(cplx z, std::int64_t m) {
  const double md = static_cast<double>(m);
  return std::polar(std::pow(std::abs(z), md), md * std::arg(z));
}

void require_on_circle(cplx z) {
  if (std::abs(std::abs(z) - 1.0) > kCircleTolerance)
    throw DomainError("spectral parameter must lie on the unit circle");
}

// I + z^{-sigma3} Q~_n for any nonzero z.
Mat2 transfer_step(double qn, std::int64_t n, cplx z) {
  return {1.0, qn * ipow(z, -2 * n - 1), qn * ipow(z, 2 * n + 1), 1.0};
}

Mat2 inverse_transfer_step(double qn, std::int64_t n, cplx z) {
  const double det = 1.0 - qn * qn;
  if (det == 0.0) throw SingularStepError("transfer step is singular (|q_n| = 1)");
  const double s = 1.0 / det;
  return {s, -s * qn * ipow(z, -2 * n - 1), -s * qn * ipow(z, 2 * n + 1), s};
}

ScatteringData from_pair(const JostPair& pair, const UnitCirclePoint& z, double c_inf) {
  const Mat2& ym = pair.y_minus;
  const Mat2& yp = pair.y_plus;
  const cplx det_plus = yp.det();
  ScatteringData out;
  out.at = z;
  out.c_inf = c_inf;
  // det(Y-_{.1}, Y+_{.2}) and det(Y+_{.1}, Y-_{.1})
  out.a = (ym.a11 * yp.a22 - yp.a12 * ym.a21) / det_plus;
  out.b = (yp.a11 * ym.a21 - ym.a11 * yp.a21) / det_plus;
  out.r = out.b / out.a;
  return out;
}

}  // namespace

Mat2 Mat2::inverse() const {
  const cplx d = det();
  return {a22 / d, -a12 / d, -a21 / d, a11 / d};
}

double max_abs_diff(const Mat2& x, const Mat2& y) {
  return std::max({std::abs(x.a11 - y.a11), std::abs(x.a12 - y.a12), std::abs(x.a21 - y.a21),
                   std::abs(x.a22 - y.a22)});
}

UnitCirclePoint UnitCirclePoint::from_angle(double theta) {
  // Wrap into (-pi, pi].
  double w = std::remainder(theta, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  return {w, std::polar(1.0, w)};
}

UnitCirclePoint UnitCirclePoint::from_complex(cplx z) {
  require_on_circle(z);
  return from_angle(std::arg(z));
}

Mat2 reduced_potential(const LatticeState& q, std::int64_t n, cplx z) {
  require_on_circle(z);
  const double qn = q.at(n);
  if (qn == 0.0) return Mat2::zero();
  return {0.0, qn * ipow(z, -2 * n - 1), qn * ipow(z, 2 * n + 1), 0.0};
}

Mat2 jost_minus(const LatticeState& q, const UnitCirclePoint& z, std::int64_t n_stop) {
  const auto [lo, hi] = q.support();
  Mat2 y = Mat2::identity();
  for (std::int64_t k = lo; k <= hi && k < n_stop; ++k) {
    const double qk = q.at(k);
    if (qk != 0.0) y = transfer_step(qk, k, z.z) * y;
  }
  return y;
}

Mat2 jost_plus(const LatticeState& q, const UnitCirclePoint& z, std::int64_t n_stop) {
  const auto [lo, hi] = q.support();
  Mat2 y = Mat2::identity();
  for (std::int64_t k = hi; k >= lo && k >= n_stop; --k) {
    const double qk = q.at(k);
    if (qk != 0.0) y = inverse_transfer_step(qk, k, z.z) * y;
  }
  return y;
}

JostPair jost_pair(const LatticeState& q, const UnitCirclePoint& z, std::int64_t site) {
  return {jost_minus(q, z, site), jost_plus(q, z, site), site};
}

ScatteringData scattering_coefficients(const LatticeState& q, const UnitCirclePoint& z) {
  const auto [lo, hi] = q.support();
  return scattering_coefficients_at(q, z, hi + 1);
}

ScatteringData scattering_coefficients_at(const LatticeState& q, const UnitCirclePoint& z,
                                          std::int64_t site) {
  require_on_circle(z.z);
  return from_pair(jost_pair(q, z, site), z, conserved_c_inf(q));
}

cplx transmission_inverse_off_circle(const LatticeState& q, cplx z) {
  if (std::abs(z) < 1.0 - kCircleTolerance)
    throw DomainError("a(z) is analytic outside the unit circle only");
  const auto [lo, hi] = q.support();
  Mat2 y = Mat2::identity();
  for (std::int64_t k = lo; k <= hi; ++k) {
    const double qk = q.at(k);
    if (qk != 0.0) y = transfer_step(qk, k, z) * y;
  }
  return y.a11;
}

ReflectionFunction::ReflectionFunction(const LatticeState& q) : c_inf_(conserved_c_inf(q)) {
  const auto [lo, hi] = q.support();
  first_ = lo;
  for (std::int64_t k = lo; k <= hi; ++k) values_.push_back(q.at(k));
}

cplx ReflectionFunction::operator()(cplx z) const {
  if (values_.empty()) return 0.0;
  // Only the first column of Y^{(-)} is needed: a = Y11, b = Y21 right of the support.
  cplx y1 = 1.0, y2 = 0.0;
  const double theta = std::arg(z);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double qk = values_[i];
    if (qk == 0.0) continue;
    const double m = 2.0 * static_cast<double>(first_ + static_cast<std::int64_t>(i)) + 1.0;
    const cplx up = qk * std::polar(1.0, -m * theta);
    const cplx down = qk * std::polar(1.0, m * theta);
    const cplx n1 = y1 + up * y2;
    const cplx n2 = down * y1 + y2;
    y1 = n1;
    y2 = n2;
  }
  return y2 / y1;
}

cplx ReflectionGrid::interpolate(double theta) const {
  const auto size = static_cast<std::int64_t>(coefficients.size());
  cplx sum = 0.0;
  for (std::int64_t i = 0; i < size; ++i) {
    const std::int64_t k = i - size / 2;
    sum += coefficients[static_cast<std::size_t>(i)] * std::polar(1.0, static_cast<double>(k) * theta);
  }
  return sum;
}

ReflectionGrid reflection_grid(const LatticeState& q, std::size_t size) {
  if (size < 64 || (size & (size - 1)) != 0)
    throw DomainError("reflection grid size must be a power of two >= 64");
  const ReflectionFunction r(q);
  ReflectionGrid grid;
  grid.points.reserve(size);
  grid.values.reserve(size);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(size);
  for (std::size_t k = 0; k < size; ++k) {
    const double theta = -std::numbers::pi + step * static_cast<double>(k + 1);
    auto p = UnitCirclePoint{theta, std::polar(1.0, theta)};
    const cplx value = r(p.z);
    grid.max_abs = std::max(grid.max_abs, std::abs(value));
    grid.points.push_back(p);
    grid.values.push_back(value);
  }
  if (grid.max_abs >= 1.0 - 1e-8)
    throw ReflectionTooLargeError("max |r| on the grid reaches 1");

  const auto n = static_cast<std::int64_t>(size);
  grid.coefficients.assign(size, 0.0);
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t k = i - n / 2;
    cplx acc = 0.0;
    for (std::size_t j = 0; j < size; ++j)
      acc += grid.values[j] * std::polar(1.0, -static_cast<double>(k) * grid.points[j].theta);
    grid.coefficients[static_cast<std::size_t>(i)] = acc / static_cast<double>(size);
  }
  return grid;
}

LatticeState staggered(const LatticeState& q) {
  std::vector<double> p(q.values().begin(), q.values().end());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const std::int64_t n = q.n_min() + static_cast<std::int64_t>(i);
    if (n % 2 != 0) p[i] = -p[i];
  }
  return LatticeState(q.n_min(), std::move(p), q.t());
}

}  // namespace dmkdv
