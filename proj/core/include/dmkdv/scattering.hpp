#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "dmkdv/lattice.hpp"

namespace dmkdv {

using cplx = std::complex<double>;

/// Row-major 2x2 complex matrix.
struct Mat2 {
  cplx a11{1.0}, a12{0.0}, a21{0.0}, a22{1.0};

  static Mat2 identity() { return {}; }
  static Mat2 zero() { return {0.0, 0.0, 0.0, 0.0}; }

  cplx det() const { return a11 * a22 - a12 * a21; }
  Mat2 inverse() const;

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
            x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
  }
  friend Mat2 operator+(const Mat2& x, const Mat2& y) {
    return {x.a11 + y.a11, x.a12 + y.a12, x.a21 + y.a21, x.a22 + y.a22};
  }
  friend Mat2 operator*(cplx s, const Mat2& x) { return {s * x.a11, s * x.a12, s * x.a21, s * x.a22}; }
};

/// Maximum entrywise modulus of x - y.
double max_abs_diff(const Mat2& x, const Mat2& y);

/// z = e^{i theta} with theta in (-pi, pi].
struct UnitCirclePoint {
  double theta = 0.0;
  cplx z{1.0, 0.0};

  static UnitCirclePoint from_angle(double theta);
  /// Throws DomainError when |z| differs from 1 by more than 1e-12.
  static UnitCirclePoint from_complex(cplx z);
};

/// z^{-sigma3} Q~_n at t = 0: [[0, q_n z^{-2n-1}], [q_n z^{2n+1}, 0]].
/// The transfer step of the spectral recursion is I + this matrix.
/// Throws DomainError if |z| is not 1 to within 1e-12.
Mat2 reduced_potential(const LatticeState& q, std::int64_t n, cplx z);

/// Left Jost solution Y^{(-)} at n_stop, from Y = I left of the support.
Mat2 jost_minus(const LatticeState& q, const UnitCirclePoint& z, std::int64_t n_stop);

/// Right Jost solution Y^{(+)} at n_stop, from Y = I right of the support.
/// Throws SingularStepError when a transfer step is not invertible.
Mat2 jost_plus(const LatticeState& q, const UnitCirclePoint& z, std::int64_t n_stop);

/// Jost solutions at a single site.
struct JostPair {
  Mat2 y_minus;
  Mat2 y_plus;
  std::int64_t at_site = 0;
};

JostPair jost_pair(const LatticeState& q, const UnitCirclePoint& z, std::int64_t site);

struct ScatteringData {
  cplx a{1.0};
  cplx b{0.0};
  cplx r{0.0};
  UnitCirclePoint at;
  double c_inf = 1.0;
};

/// a = det(Y-_{.1}, Y+_{.2}) / det Y+, b = det(Y+_{.1}, Y-_{.1}) / det Y+.
/// Evaluated one site past the right edge of the support, where Y+ = I.
ScatteringData scattering_coefficients(const LatticeState& q, const UnitCirclePoint& z);

/// Same formulas evaluated from the Jost pair at an arbitrary site.
ScatteringData scattering_coefficients_at(const LatticeState& q, const UnitCirclePoint& z,
                                          std::int64_t site);

/// a(z) from the left Jost column off the circle (|z| >= 1); used to probe a -> 1.
cplx transmission_inverse_off_circle(const LatticeState& q, cplx z);

/// Point evaluator for r(z) on the unit circle. Copies only the support of the
/// data so repeated evaluation costs O(support) per point.
class ReflectionFunction {
 public:
  ReflectionFunction() = default;
  explicit ReflectionFunction(const LatticeState& q);

  cplx operator()(cplx z) const;
  /// |a|^2 - |b|^2 should equal this on the circle.
  double c_inf() const { return c_inf_; }
  bool is_zero() const { return values_.empty(); }

 private:
  std::int64_t first_ = 0;
  std::vector<double> values_;
  double c_inf_ = 1.0;
};

/// Anything that maps a point of the unit circle to r there.
using ReflectionEvaluator = std::function<cplx(cplx)>;

/// r sampled at theta_k = -pi + 2 pi (k + 1) / size, k = 0 .. size-1.
struct ReflectionGrid {
  std::vector<UnitCirclePoint> points;
  std::vector<cplx> values;
  double max_abs = 0.0;

  /// Trigonometric interpolant of the samples, evaluated at angle theta.
  cplx interpolate(double theta) const;

  /// Fourier coefficients c_k of the interpolant, k = -size/2 .. size/2 - 1.
  std::vector<cplx> coefficients;
};

/// Throws DomainError unless size is a power of two >= 64, and
/// ReflectionTooLargeError if max|r| >= 1 - 1e-8.
ReflectionGrid reflection_grid(const LatticeState& q, std::size_t size);

/// p_n = (-1)^n q_n.
LatticeState staggered(const LatticeState& q);

}  // namespace dmkdv
