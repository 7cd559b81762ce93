#include <cmath>
#include <numbers>

#include "doctest.h"
#include "dmkdv/errors.hpp"
#include "dmkdv/model.hpp"

using namespace dmkdv;

namespace {
constexpr double kPi = std::numbers::pi;

double rel(cplx x, cplx y) { return std::abs(x - y) / std::abs(y); }
}  // namespace

TEST_CASE("complex Gamma, closed forms") {
  CHECK(std::abs(complex_gamma(1.0) - 1.0) < 1e-12);
  CHECK(std::abs(complex_gamma(0.5) - std::sqrt(kPi)) < 1e-12);
  for (double nu : {0.001, 0.25, 1.0}) {
    const double exact = kPi / (nu * std::sinh(kPi * nu));
    CHECK(std::abs(std::norm(complex_gamma(cplx(0.0, nu))) - exact) / exact < 1e-12);
  }
  CHECK_THROWS_AS(complex_gamma(0.0), PoleError);
  CHECK_THROWS_AS(complex_gamma(-3.0), PoleError);
}

TEST_CASE("complex Gamma, reference values") {
  // 30-digit values, rounded to 17.
  CHECK(rel(complex_gamma({0.3, 0.7}), {0.30968625674374916, -0.85678775293927057}) < 1e-13);
  CHECK(rel(complex_gamma({-1.5, 0.2}), {1.9625551258028472, 0.27845955312126246}) < 1e-13);
  CHECK(rel(complex_gamma({5.5, 0.0}), {52.34277778455352, 0.0}) < 1e-13);
  CHECK(rel(complex_gamma({0.0, -0.1}), {-0.56823808753712092, 9.9020662958838439}) < 1e-13);
  CHECK(rel(complex_gamma({2.2, -3.1}), {-0.12439252209173253, -0.06775428810024952}) < 1e-13);
  CHECK(rel(complex_gamma({-0.5, 0.0}), {-3.5449077018110321, 0.0}) < 1e-13);
}

TEST_CASE("m1 entry") {
  for (auto conv : {SignConvention::per_parity, SignConvention::combined}) {
    CHECK(m1_entry(0.1, 0.0, 1, conv) == cplx(0.0));
    for (double nu : {0.001, 0.01, 0.1, 0.5}) {
      const double mod = std::sqrt(1.0 - std::exp(-2.0 * kPi * nu));
      for (int j = 1; j <= 4; ++j)
        CHECK(std::abs(std::abs(m1_entry(nu, std::polar(mod, 0.3 * j), j, conv)) - std::sqrt(nu)) < 1e-10);
    }
  }
  CHECK_THROWS_AS(m1_entry(0.1, 0.2, 0, SignConvention::per_parity), DomainError);
}

TEST_CASE("conjugate pairing holds under exactly one convention") {
  const double nu = 0.05;
  const cplx r1 = std::polar(std::sqrt(1.0 - std::exp(-2.0 * kPi * nu)), 0.9);
  auto paired = [&](SignConvention conv) {
    return std::abs(m1_entry(nu, std::conj(r1), 2, conv) - std::conj(m1_entry(nu, r1, 1, conv))) < 1e-13;
  };
  CHECK(paired(SignConvention::per_parity));
  CHECK_FALSE(paired(SignConvention::combined));
  CHECK(sign_convention_from_string("combined") == SignConvention::combined);
  CHECK_THROWS_AS(sign_convention_from_string("other"), ConfigError);
}

TEST_CASE("zero data gives a zero leading term") {
  const AsymptoticEvaluator eval(LatticeState::zeros(3));
  const auto res = eval.evaluate(50, 100.0);
  CHECK(res.q_asym == 0.0);
  CHECK(res.imag_residual == 0.0);
}

TEST_CASE("contribution moduli") {
  const AsymptoticEvaluator eval(LatticeState(0, {0.3}));
  const auto set = eval.stationary_for(200, 400.0);
  const auto coeffs = eval.coefficients_for(set);
  const auto res = eval.evaluate(200, 400.0);
  const double n = static_cast<double>(set.ray.n);
  for (std::size_t k = 0; k < 4; ++k) {
    const double expected = 0.5 * std::pow(4.0 * 400.0 * 400.0 - n * n, -0.25) * std::sqrt(coeffs.nu[k]) *
                            std::norm(coeffs.delta_j0[k]);
    CHECK(std::abs(res.contributions[k]) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("leading term matches direct integration at t = 100") {
  const LatticeState q0 = InitialProfile{}.realize(window_half_width(100.0, 120.0));
  const auto direct = integrate(q0, 100.0, 0.005);
  const AsymptoticEvaluator eval(q0);
  for (std::int64_t n : {-60, -1, 0, 50, 51, 120}) {
    const auto res = eval.evaluate(n, 100.0);
    double amplitude = 0.0;
    for (const cplx& c : res.contributions) amplitude += std::abs(c);
    amplitude /= std::abs(res.delta_at_zero);
    CHECK(std::abs(res.q_asym - direct.at(n)) < 0.05 * amplitude);
    CHECK(res.imag_residual < 1e-12);
  }
}

TEST_CASE("the rejected convention trips the realness guard") {
  AsymptoticOptions opt;
  opt.convention = SignConvention::combined;
  const AsymptoticEvaluator eval(LatticeState(0, {0.3}), opt);
  CHECK_THROWS_AS(eval.evaluate(400, 800.0), ConventionError);
  opt.check_realness = false;
  const auto res = AsymptoticEvaluator(LatticeState(0, {0.3}), opt).evaluate(400, 800.0);
  CHECK(res.imag_residual > realness_threshold(800.0, 0.01));
  CHECK(realness_threshold(800.0, 0.01) == doctest::Approx(0.1 * std::log(800.0) / 800.0));
}

TEST_CASE("oscillation decomposition") {
  const AsymptoticEvaluator eval(LatticeState(0, {0.3}));
  const auto set = stationary_points({0, 100.0});
  const auto coeffs = eval.coefficients_for(set);
  const auto d1 = oscillation_decomposition(set, coeffs, 1);
  CHECK(d1.site_phase == doctest::Approx(-kPi / 4));
  CHECK(d1.phase_slope_t == doctest::Approx(1.0));  // -Im S1^2 = -Im e^{-i pi/2}

  // Finite-difference in t of arg exp(-(t/2)(S^2 - S^{-2})) at fixed S.
  for (int j = 1; j <= 4; ++j) {
    const cplx s = set.S(j);
    auto phase = [&](double t) { return std::arg(std::exp(-0.5 * t * (s * s - 1.0 / (s * s)))); };
    const double h = 1e-4;
    const double slope = std::remainder(phase(10.0 + h) - phase(10.0 - h), 2 * kPi) / (2 * h);
    CHECK(slope == doctest::Approx(oscillation_decomposition(set, coeffs, j).phase_slope_t).epsilon(1e-6));
  }

  // amplitude * t^{1/2} roughly constant along v = 0.5.
  double lo = 1e300, hi = 0.0;
  for (double t : {100.0, 200.0, 400.0, 800.0}) {
    const auto s = eval.stationary_for(std::llround(0.5 * t), t);
    const double a = oscillation_decomposition(s, eval.coefficients_for(s), 1).amplitude * std::sqrt(t);
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  CHECK(hi / lo < 1.05);
}
