#include "dmkdv/model.hpp"

#include <cmath>
#include <numbers>

#include "dmkdv/errors.hpp"

namespace dmkdv {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

cplx lanczos(cplx w) {
  w -= 1.0;
  cplx x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (w + static_cast<double>(i));
  const cplx t = w + kLanczosG + 0.5;
  return std::sqrt(2.0 * kPi) * std::exp((w + 0.5) * std::log(t) - t) * x;
}

}  // namespace

cplx complex_gamma(cplx w) {
  if (w.imag() == 0.0 && w.real() <= 0.0 && w.real() == std::floor(w.real()))
    throw PoleError("Gamma has a pole at nonpositive integers");
  if (w.real() < 0.5) return kPi / (std::sin(kPi * w) * lanczos(1.0 - w));
  return lanczos(w);
}

std::string to_string(SignConvention c) {
  return c == SignConvention::per_parity ? "per_parity" : "combined";
}

SignConvention sign_convention_from_string(const std::string& name) {
  if (name == "per_parity") return SignConvention::per_parity;
  if (name == "combined") return SignConvention::combined;
  throw ConfigError("unknown sign convention '" + name + "'");
}

cplx m1_entry(double nu, cplx r_at_S, int j, SignConvention convention) {
  if (j < 1 || j > 4) throw DomainError("cross index must be in 1..4");
  if (nu == 0.0 || r_at_S == cplx(0.0)) return 0.0;
  const double common = std::sqrt(2.0 * kPi) * std::exp(-kPi * nu / 2.0);
  const bool odd = (j % 2 == 1);
  if (convention == SignConvention::combined) {
    const double sign = odd ? 1.0 : -1.0;
    const cplx arg = (odd ? -1.0 : 1.0) * kI * nu;
    return sign * kI * common * std::polar(1.0, -kPi / 4.0) / (r_at_S * complex_gamma(arg));
  }
  if (odd) return kI * common * std::polar(1.0, kPi / 4.0) / (r_at_S * complex_gamma(-kI * nu));
  return -kI * common * std::polar(1.0, -kPi / 4.0) / (r_at_S * complex_gamma(kI * nu));
}

std::array<CrossSolution, 4> solve_crosses(const CoefficientSet& coeffs, SignConvention convention) {
  std::array<CrossSolution, 4> out;
  for (int j = 1; j <= 4; ++j) {
    const auto k = static_cast<std::size_t>(j - 1);
    out[k] = {j, coeffs.nu[k], coeffs.r_at_S[k],
              m1_entry(coeffs.nu[k], coeffs.r_at_S[k], j, convention), convention};
  }
  return out;
}

double realness_threshold(double t, double calibration) {
  return 10.0 * calibration * std::max(1.0, std::log(t)) / t;
}

AsymptoticResult leading_term(const StationarySet& set, const CoefficientSet& coeffs,
                              const std::array<CrossSolution, 4>& crosses,
                              std::optional<double> realness_limit) {
  AsymptoticResult res;
  res.n = set.ray.n;
  res.t = set.ray.t;
  res.delta_at_zero = coeffs.delta_at_zero;
  res.convention = crosses[0].convention;
  cplx sum = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const cplx s = set.points[k];
    const cplx d0 = coeffs.delta_j0[k];
    res.contributions[k] = set.beta[k] / (s * s) * d0 * d0 * crosses[k].m1_12;
    sum += res.contributions[k];
  }
  const cplx value = sum / coeffs.delta_at_zero;
  res.q_asym = value.real();
  res.imag_residual = std::abs(value.imag());
  if (realness_limit && res.imag_residual > *realness_limit) {
    throw ConventionError("leading term has imaginary residual " + std::to_string(res.imag_residual) +
                          " above " + std::to_string(*realness_limit) +
                          "; branch or sign convention is inconsistent");
  }
  return res;
}

OscillationDecomposition oscillation_decomposition(const StationarySet& set,
                                                   const CoefficientSet& coeffs, int j) {
  if (j < 1 || j > 4) throw DomainError("cross index must be in 1..4");
  const auto k = static_cast<std::size_t>(j - 1);
  const cplx s = set.points[k];
  OscillationDecomposition out;
  out.amplitude = std::abs(set.beta[k]) * std::sqrt(coeffs.nu[k]) * std::norm(coeffs.delta_j0[k]);
  out.phase_slope_t = -(s * s).imag();
  out.phase_slope_logt = (j % 2 == 0 ? 1.0 : -1.0) * coeffs.nu[k] / 2.0;
  out.site_phase = std::arg(s);
  return out;
}

AsymptoticEvaluator::AsymptoticEvaluator(const LatticeState& initial, AsymptoticOptions options)
    : reflection_(staggered(initial)), options_(options) {}

StationarySet AsymptoticEvaluator::stationary_for(std::int64_t n, double t) const {
  return stationary_points(RayParams{n + 1, t}, options_.merging_margin);
}

CoefficientSet AsymptoticEvaluator::coefficients_for(const StationarySet& set) const {
  const ReflectionEvaluator r = [this](cplx z) { return reflection_(z); };
  return compute_coefficients(r, set, options_.quadrature);
}

AsymptoticResult AsymptoticEvaluator::evaluate(std::int64_t n, double t) const {
  const StationarySet set = stationary_for(n, t);
  AsymptoticResult res;
  if (reflection_.is_zero()) {
    res.n = n;
    res.t = t;
    res.convention = options_.convention;
    return res;
  }
  const CoefficientSet coeffs = coefficients_for(set);
  const auto crosses = solve_crosses(coeffs, options_.convention);
  std::optional<double> limit;
  if (options_.check_realness) limit = realness_threshold(t, options_.realness_calibration);
  res = leading_term(set, coeffs, crosses, limit);
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  res.n = n;
  res.q_asym *= sign;
  for (auto& c : res.contributions) c *= sign;
  return res;
}

}  // namespace dmkdv
