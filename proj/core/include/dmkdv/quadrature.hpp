#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "dmkdv/errors.hpp"

namespace dmkdv {

struct QuadratureOptions {
  double abs_tol = 1e-11;
  int max_panels = 20000;
  /// Uniform panels the interval is cut into before adaptive refinement.
  int initial_panels = 4;
  /// Geometric refinement toward a weakly singular endpoint: panel lengths
  /// shrink by this ratio down to `cluster_depth` levels.
  double cluster_ratio = 0.5;
  int cluster_depth = 45;
};

namespace detail {

/// 16-point Gauss-Legendre nodes/weights on [-1, 1], positive half.
struct GaussLegendre16 {
  std::array<double, 8> x{};
  std::array<double, 8> w{};
  GaussLegendre16();
};

const GaussLegendre16& gauss_legendre16();

template <class F>
auto gl16_panel(const F& f, double a, double b) {
  const auto& rule = gauss_legendre16();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  decltype(f(mid)) sum{};
  for (std::size_t i = 0; i < 8; ++i) {
    const double dx = half * rule.x[i];
    sum += rule.w[i] * (f(mid - dx) + f(mid + dx));
  }
  return sum * half;
}

}  // namespace detail

/// Adaptive composite 16-point Gauss-Legendre on [a, b]. A panel is accepted
/// when its value and the sum over its two halves agree to the panel's share
/// of abs_tol. Throws QuadratureError when max_panels is exhausted.
template <class F>
auto integrate_adaptive(const F& f, double a, double b, const QuadratureOptions& opt = {}) {
  using T = decltype(f(a));
  T total{};
  if (a == b) return total;
  const double length = std::abs(b - a);
  struct Panel {
    double lo, hi;
    T value;
  };
  std::vector<Panel> stack;
  const int initial = std::max(1, opt.initial_panels);
  for (int k = initial - 1; k >= 0; --k) {
    const double lo = a + (b - a) * k / initial;
    const double hi = a + (b - a) * (k + 1) / initial;
    stack.push_back({lo, hi, detail::gl16_panel(f, lo, hi)});
  }
  int panels = initial;
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (p.lo + p.hi);
    const T left = detail::gl16_panel(f, p.lo, mid);
    const T right = detail::gl16_panel(f, mid, p.hi);
    const double share = opt.abs_tol * std::abs(p.hi - p.lo) / length;
    if (std::abs(left + right - p.value) <= share || std::abs(p.hi - p.lo) < 1e-15 * length) {
      total += left + right;
      continue;
    }
    if (++panels > opt.max_panels)
      throw QuadratureError("adaptive quadrature did not reach tolerance within the panel budget");
    stack.push_back({mid, p.hi, right});
    stack.push_back({p.lo, mid, left});
  }
  return total;
}

/// As integrate_adaptive, but first splits [a, b] into geometrically shrinking
/// panels toward b, for integrands with a removable or logarithmic endpoint.
template <class F>
auto integrate_clustered(const F& f, double a, double b, const QuadratureOptions& opt = {}) {
  using T = decltype(f(a));
  T total{};
  if (a == b) return total;
  QuadratureOptions sub = opt;
  sub.initial_panels = 1;
  const double budget = opt.abs_tol / (opt.cluster_depth + 1);
  sub.abs_tol = budget;
  double lo = a;
  double width = b - a;
  for (int level = 0; level < opt.cluster_depth; ++level) {
    width *= opt.cluster_ratio;
    const double hi = b - width;
    total += integrate_adaptive(f, lo, hi, sub);
    lo = hi;
  }
  total += integrate_adaptive(f, lo, b, sub);
  return total;
}

}  // namespace dmkdv
