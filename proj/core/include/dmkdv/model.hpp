#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>

#include "dmkdv/lattice.hpp"
#include "dmkdv/phase.hpp"
#include "dmkdv/quadrature.hpp"
#include "dmkdv/scattering.hpp"
#include "dmkdv/weights.hpp"

namespace dmkdv {

/// Gamma(w) by the Lanczos approximation (g = 7, 9 terms) with reflection
/// for Re w < 1/2. Throws PoleError at nonpositive integers.
cplx complex_gamma(cplx w);

/// Which closed form of the parabolic-cylinder entry to use.
///  - per_parity: odd j carry e^{+i pi/4} / Gamma(-i nu), even j e^{-i pi/4} / Gamma(i nu).
///  - combined: a single formula with e^{-i pi/4} and Gamma((-1)^j i nu) for every j.
/// per_parity is the one that gives a real leading term for real data.
enum class SignConvention { per_parity, combined };

std::string to_string(SignConvention c);
SignConvention sign_convention_from_string(const std::string& name);

struct CrossSolution {
  int j = 1;
  double nu = 0.0;
  cplx r_at_S{0.0};
  cplx m1_12{0.0};
  SignConvention convention = SignConvention::per_parity;
};

/// (m_1^j)_{12}. Returns 0 when nu or r(S_j) vanishes.
cplx m1_entry(double nu, cplx r_at_S, int j, SignConvention convention);

std::array<CrossSolution, 4> solve_crosses(const CoefficientSet& coeffs, SignConvention convention);

struct AsymptoticResult {
  std::int64_t n = 0;
  double t = 0.0;
  double q_asym = 0.0;
  /// beta_j S_j^{-2} (delta_j^0)^2 (m_1^j)_{12}; the leading term is
  /// Re[sum / delta(0)] up to the lattice sign (see asymptotic_solution).
  std::array<cplx, 4> contributions{};
  double imag_residual = 0.0;
  cplx delta_at_zero{1.0};
  SignConvention convention = SignConvention::per_parity;
};

/// Realness threshold used by leading_term: 10 * calibration * log(t) / t.
double realness_threshold(double t, double calibration);

/// delta(0)^{-1} sum_j beta_j S_j^{-2} (delta_j^0)^2 (m_1^j)_{12} at the ray of `set`.
/// q_asym is the real part, imag_residual |Im|. If realness_limit is given and
/// imag_residual exceeds it, throws ConventionError.
AsymptoticResult leading_term(const StationarySet& set, const CoefficientSet& coeffs,
                              const std::array<CrossSolution, 4>& crosses,
                              std::optional<double> realness_limit = std::nullopt);

struct OscillationDecomposition {
  double amplitude = 0.0;
  /// d/dt of the phase of S_j^n e^{-(t/2)(S_j^2 - S_j^{-2})} at fixed S_j, n: -Im S_j^2.
  double phase_slope_t = 0.0;
  /// coefficient of log t from beta_j^{(-1)^{j-1} i nu_j}: (-1)^j nu_j / 2.
  double phase_slope_logt = 0.0;
  /// theta_j = arg S_j, the per-site phase.
  double site_phase = 0.0;
};

OscillationDecomposition oscillation_decomposition(const StationarySet& set,
                                                   const CoefficientSet& coeffs, int j);

struct AsymptoticOptions {
  SignConvention convention = SignConvention::per_parity;
  QuadratureOptions quadrature{};
  double merging_margin = kDefaultMergingMargin;
  double realness_calibration = 0.01;
  bool check_realness = true;
};

/// Leading-order long-time value of q_n(t) for the lattice started from `initial`.
///
/// The spectral problem as normalised here reconstructs p_{m-1} for the
/// staggered field p_n = (-1)^n q_n (which solves the time-reversed lattice),
/// from the data at site m. So q_n(t) is (-1)^n times the leading term built on
/// the reflection coefficient of (-1)^k q_k(0), evaluated on the ray of m = n + 1.
class AsymptoticEvaluator {
 public:
  explicit AsymptoticEvaluator(const LatticeState& initial, AsymptoticOptions options = {});

  AsymptoticResult evaluate(std::int64_t n, double t) const;

  /// Ray, stationary set and coefficients of the RHP site for lattice site n.
  StationarySet stationary_for(std::int64_t n, double t) const;
  CoefficientSet coefficients_for(const StationarySet& set) const;

  const ReflectionFunction& reflection() const { return reflection_; }
  const AsymptoticOptions& options() const { return options_; }

 private:
  ReflectionFunction reflection_;
  AsymptoticOptions options_;
};

}  // namespace dmkdv
