// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dmkdv/harness.hpp"
#include "dmkdv/lattice.hpp"
#include "dmkdv/model.hpp"
#include "dmkdv/phase.hpp"
#include "dmkdv/scattering.hpp"
#include "dmkdv/weights.hpp"

using namespace dmkdv;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<std::string> notes;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string sci(double x) { return fmt("%.3e", x); }

int failures = 0;

void run(int id, const char* title, double time_limit, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what(), {}};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = time_limit <= 0.0 || secs < time_limit;
  const bool pass = out.pass && in_time;
  if (!pass) ++failures;
  std::printf("criterion %d [PRIMARY] %s: %s; %s; %.2fs%s\n", id, pass ? "PASS" : "FAIL", title,
              out.detail.c_str(), secs, in_time ? "" : " (over time budget)");
  for (const auto& n : out.notes) std::printf("  note: %s\n", n.c_str());
  std::fflush(stdout);
}

UnitCirclePoint circle(int k, int n) { return UnitCirclePoint::from_angle(-kPi + 2.0 * kPi * (k + 1) / n); }

ReflectionEvaluator reference_reflection() {
  return [r = ReflectionFunction(staggered(LatticeState(0, {0.3})))](cplx z) { return r(z); };
}

Outcome single_site_scattering() {
  double err = 0.0;
  const LatticeState q(0, {0.3});
  for (int k = 0; k < 256; ++k) {
    const auto p = circle(k, 256);
    const auto s = scattering_coefficients(q, p);
    err = std::max({err, std::abs(s.a - 1.0), std::abs(s.b - 0.3 * p.z)});
  }
  return {err < 1e-12, "max |a-1|, |b-0.3z| = " + sci(err) + " (< 1e-12)", {}};
}

Outcome unitarity() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> uni(-0.5, 0.5);
  std::vector<double> v(16);
  for (double& x : v) x = uni(rng);
  const LatticeState q(-8, v);
  const double c_inf = conserved_c_inf(q);
  double err = 0.0;
  for (int k = 0; k < 256; ++k) {
    const auto s = scattering_coefficients(q, circle(k, 256));
    err = std::max(err, std::abs(std::norm(s.a) - std::norm(s.b) - c_inf));
  }
  return {err < 1e-10, "max ||a|^2-|b|^2-c| = " + sci(err) + " (< 1e-10)", {}};
}

Outcome phase_identities() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> speed(-1.8, 1.8), time(10.0, 1000.0);
  double first = 0.0, scaled = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double t = time(rng);
    const RayParams ray{std::llround(speed(rng) * t), t};
    const auto set = stationary_points(ray);
    for (int j = 1; j <= 4; ++j) {
      const auto k = static_cast<std::size_t>(j - 1);
      first = std::max(first, std::abs(phase_derivative(set.S(j), ray)));
      const cplx target = (j % 2 == 1 ? 1.0 : -1.0) * kI / 2.0;
      scaled = std::max(scaled, std::abs(set.phi_dd[k] * set.beta[k] * set.beta[k] - target));
    }
  }
  return {first < 1e-10 && scaled < 1e-12,
          "max |phi'(S)| = " + sci(first) + " (< 1e-10), max |phi''beta^2 - (-1)^{j+1} i/2| = " + sci(scaled) +
              " (< 1e-12)",
          {}};
}

Outcome delta_product() {
  const auto r = reference_reflection();
  const auto set = stationary_points({50, 100.0});
  double err = 0.0;
  for (double radius : {0.3, 0.6, 1.5, 3.0})
    for (int k = 0; k < 5; ++k) {
      const cplx z = std::polar(radius, 0.3 + 2.0 * kPi * k / 5.0);
      cplx prod = 1.0;
      for (int j = 1; j <= 4; ++j) prod *= delta_factor(r, set, j, z);
      err = std::max(err, std::abs(delta_at(r, set, z) - prod));
    }
  return {err < 1e-9, "max |delta - prod delta_j| over 20 probes = " + sci(err) + " (< 1e-9)", {}};
}

Outcome constant_modulus() {
  const double c = 0.3;
  const auto r = reference_reflection();
  const auto set = stationary_points({0, 100.0});
  const double err = std::abs(delta_at(r, set, 0.0) - 1.0 / std::sqrt(1.0 - c * c));
  double chi = 0.0;
  for (int j = 1; j <= 4; ++j) chi = std::max(chi, std::abs(chi_at_stationary(r, set, j)));
  const double tol = QuadratureOptions{}.abs_tol;
  return {err < 1e-9 && chi < tol,
          "|delta(0) - (1-c^2)^{-1/2}| = " + sci(err) + " (< 1e-9), max |chi_j(S_j)| = " + sci(chi) + " (< " +
              sci(tol) + ")",
          {}};
}

Outcome model_modulus() {
  double m = 0.0;
  for (double nu : {0.001, 0.01, 0.1, 0.5}) {
    const double mod = std::sqrt(1.0 - std::exp(-2.0 * kPi * nu));
    for (int j = 1; j <= 4; ++j)
      m = std::max(m, std::abs(std::abs(m1_entry(nu, std::polar(mod, 0.4 * j), j, SignConvention::per_parity)) -
                               std::sqrt(nu)));
  }
  double g = std::max(std::abs(complex_gamma(1.0) - 1.0), std::abs(complex_gamma(0.5) - std::sqrt(kPi)));
  for (double nu : {0.001, 0.01, 0.1, 0.5}) {
    const double exact = kPi / (nu * std::sinh(kPi * nu));
    g = std::max(g, std::abs(std::norm(complex_gamma(kI * nu)) - exact) / exact);
  }
  return {m < 1e-10 && g < 1e-12,
          "max ||m1_12| - sqrt(nu)| = " + sci(m) + " (< 1e-10), Gamma identities = " + sci(g) + " (< 1e-12)", {}};
}

Outcome integrator() {
  const LatticeState s = InitialProfile{}.realize(50);
  auto err = [&](double h) {
    const auto a = integrate(s, 5.0, h), b = integrate(s, 5.0, h / 8.0);
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a.values()[i] - b.values()[i]));
    return e;
  };
  const double order = std::log2(err(0.1) / err(0.05));
  const LatticeState wide = InitialProfile{}.realize(200);
  const double drift = std::abs(conserved_c_inf(integrate(wide, 50.0, 0.01)) - conserved_c_inf(wide));
  return {order >= 3.7 && order <= 4.3 && drift < 1e-8,
          "observed order = " + fmt("%.4f", order) + " (in [3.7, 4.3]), c_inf drift = " + sci(drift) + " (< 1e-8)",
          {}};
}

RunConfig reference_config() { return parse_config("{}"); }

std::vector<ComparisonRecord> reference_rows;

Outcome end_to_end() {
  const RunConfig cfg = reference_config();
  reference_rows = run_compare(cfg);
  Outcome out;
  for (const auto& r : reference_rows)
    if (r.failed) return {false, "row t=" + fmt("%g", r.t) + " failed: " + r.error, {}};

  bool a = true, b = true;
  double lo_env = 1e300, hi_env = 0.0, lo_s = 1e300, hi_s = 0.0;
  double previous = 1e300;
  for (const auto& r : reference_rows) {
    const double env = std::abs(r.q_direct) / r.amplitude;
    lo_env = std::min(lo_env, env);
    hi_env = std::max(hi_env, env);
    a = a && env >= 0.05 && env <= 1.5;
    const double rel = r.abs_err / r.amplitude;
    if (r.t == cfg.times.front()) b = b && rel < 0.5;
    b = b && rel < previous;
    previous = rel;
    lo_s = std::min(lo_s, r.scaled_err);
    hi_s = std::max(hi_s, r.scaled_err);
    out.notes.push_back("t=" + fmt("%g", r.t) + " n=" + std::to_string(r.n) + " q_direct=" + sci(r.q_direct) +
                        " q_asym=" + sci(r.q_asym) + " abs_err=" + sci(r.abs_err) + " amplitude=" +
                        sci(r.amplitude) + " abs_err/amplitude=" + sci(rel) + " scaled_err=" + sci(r.scaled_err));
  }
  const bool c = hi_s / lo_s < 4.0;
  out.pass = a && b && c;
  out.detail = std::string("(a) ") + (a ? "pass" : "FAIL") + " |q_direct|/envelope in [" + fmt("%.3f", lo_env) +
               ", " + fmt("%.3f", hi_env) + "]; (b) " + (b ? "pass" : "FAIL") +
               " abs_err/amplitude strictly decreasing; (c) " + (c ? "pass" : "FAIL") +
               " scaled_err max/min = " + fmt("%.2f", hi_s / lo_s) + " (< 4)";

  // Diagnostic only: the largest error over the 13 sites around n = v t.
  const double t_max = cfg.times.back();
  const LatticeState q0 = cfg.profile.realize(window_half_width(t_max, cfg.window_margin));
  const auto snaps = integrate_snapshots(q0, cfg.times, cfg.dt);
  const AsymptoticEvaluator eval(q0);
  std::vector<double> sup;
  for (std::size_t k = 0; k < cfg.times.size(); ++k) {
    const double t = cfg.times[k];
    const auto n0 = std::llround(cfg.rays.front() * t);
    double e = 0.0;
    for (std::int64_t n = n0 - 6; n <= n0 + 6; ++n) e = std::max(e, std::abs(snaps[k].at(n) - eval.evaluate(n, t).q_asym));
    sup.push_back(e * t / std::log(t));
  }
  const auto [mn, mx] = std::minmax_element(sup.begin(), sup.end());
  out.notes.push_back("local-sup scaled_err over n = vt +- 6: " + sci(sup[0]) + ", " + sci(sup[1]) + ", " +
                      sci(sup[2]) + ", " + sci(sup[3]) + " (max/min " + fmt("%.2f", *mx / *mn) + ")");
  return out;
}

Outcome realness() {
  const double t = 800.0;
  const ComparisonRecord* row = nullptr;
  for (const auto& r : reference_rows)
    if (r.t == t && !r.failed) row = &r;
  double selected = 0.0;
  if (row) {
    selected = row->imag_residual * std::sqrt(t);
  } else {
    selected = AsymptoticEvaluator(InitialProfile{}.realize(1)).evaluate(400, t).imag_residual * std::sqrt(t);
  }
  AsymptoticOptions opt;
  opt.convention = SignConvention::combined;
  opt.check_realness = false;
  const double rejected = AsymptoticEvaluator(InitialProfile{}.realize(1), opt).evaluate(400, t).imag_residual *
                          std::sqrt(t);
  return {selected < 0.05 && rejected >= 0.05,
          "per_parity imag/t^{-1/2} = " + sci(selected) + " (< 0.05), combined = " + sci(rejected) +
              " (must fail, >= 0.05)",
          {}};
}

}  // namespace

int main() {
  run(1, "single-site closed-form scattering", 1.0, single_site_scattering);
  run(2, "unitarity", 5.0, unitarity);
  run(3, "phase identities", 1.0, phase_identities);
  run(4, "delta-product identity", 10.0, delta_product);
  run(5, "constant-|r| closed form", 0.0, constant_modulus);
  run(6, "model modulus and Gamma identities", 0.0, model_modulus);
  run(7, "integrator order and conservation", 0.0, integrator);
  run(8, "end-to-end asymptotic law", 600.0, end_to_end);
  run(9, "realness and sign-convention audit", 0.0, realness);
  std::printf("%s: %d of 9 criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
