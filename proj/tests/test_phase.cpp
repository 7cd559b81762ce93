#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "dmkdv/errors.hpp"
#include "dmkdv/phase.hpp"

using namespace dmkdv;

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

std::vector<RayParams> random_rays(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> speed(-1.8, 1.8), time(5.0, 2000.0);
  std::vector<RayParams> rays;
  for (int i = 0; i < count; ++i) {
    const double t = time(rng);
    rays.push_back({static_cast<std::int64_t>(std::llround(speed(rng) * t)), t});
  }
  return rays;
}
}  // namespace

TEST_CASE("phase values") {
  const RayParams ray{7, 13.0};
  CHECK(std::abs(phase_at(1.0, ray)) < 1e-15);
  CHECK(std::abs(phase_at(kI, ray) - (-kI * 7.0 * kPi / 2.0)) < 1e-13);
  for (double th : {-2.0, -0.3, 0.8, 2.9}) CHECK(std::abs(phase_at(std::polar(1.0, th), ray).real()) < 1e-12);
}

TEST_CASE("symmetric ray") {
  const auto set = stationary_points({0, 10.0});
  CHECK(std::abs(set.S(1) - std::polar(1.0, -kPi / 4)) < 1e-15);
  CHECK(std::abs(set.S(2) - std::polar(1.0, kPi / 4)) < 1e-15);
  CHECK(std::abs(set.S(3) - std::polar(1.0, 3 * kPi / 4)) < 1e-15);
  CHECK(std::abs(set.S(4) - std::polar(1.0, -3 * kPi / 4)) < 1e-15);
  CHECK(set.theta0 == doctest::Approx(kPi / 4));
}

TEST_CASE("v = 1 gives A = (sqrt 3 - i) / 2") {
  const auto set = stationary_points({10, 10.0});
  CHECK(std::abs(set.S(1) - cplx(std::sqrt(3.0), -1.0) / 2.0) < 1e-15);
  for (const cplx& s : set.points) CHECK(std::abs(s) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("stationary points are zeros of the derivative") {
  for (const auto& ray : random_rays(1, 100)) {
    const auto set = stationary_points(ray);
    for (int j = 1; j <= 4; ++j) CHECK(std::abs(phase_derivative(set.S(j), ray)) < 1e-10);
  }
}

TEST_CASE("second derivative") {
  CHECK(std::abs(phase_second_derivative({0, 1.0}, 1) - 4.0) < 1e-14);
  // S2^{-4} = e^{-i pi} as well, so direct differentiation gives +4 here too.
  CHECK(std::abs(phase_second_derivative({0, 1.0}, 2) - 4.0) < 1e-14);
  CHECK(std::abs(phase_second_derivative_direct(std::polar(1.0, kPi / 4), {0, 1.0}) - 4.0) < 1e-14);
  for (const auto& ray : random_rays(2, 50)) {
    const auto set = stationary_points(ray);
    for (int j = 1; j <= 4; ++j) {
      const cplx closed = phase_second_derivative(ray, j);
      const cplx direct = phase_second_derivative_direct(set.S(j), ray);
      CHECK(std::abs(closed - direct) / std::abs(direct) < 1e-10);
    }
  }
}

TEST_CASE("scaling factor identities") {
  const cplx b1 = scaling_factor({0, 1.0}, 1);
  CHECK(std::abs(b1 * b1 - kI / 8.0) < 1e-15);
  for (const auto& ray : random_rays(3, 100)) {
    const auto set = stationary_points(ray);
    const double n = static_cast<double>(ray.n);
    const double modulus = 0.5 * std::pow(4.0 * ray.t * ray.t - n * n, -0.25);
    for (int j = 1; j <= 4; ++j) {
      const auto k = static_cast<std::size_t>(j - 1);
      const cplx target = (j % 2 == 1 ? 1.0 : -1.0) * kI / 2.0;
      CHECK(std::abs(set.phi_dd[k] * set.beta[k] * set.beta[k] - target) < 1e-12);
      CHECK(std::abs(set.beta[k]) == doctest::Approx(modulus).epsilon(1e-13));
    }
  }
  // t -> 4t at fixed v: (4t^2 - n^2)^{-1/4} halves.
  const double ratio = std::abs(scaling_factor({400, 800.0}, 1)) / std::abs(scaling_factor({100, 200.0}, 1));
  CHECK(ratio == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(stationary_points({196, 100.0}), MergingPointsError);
  CHECK_THROWS_AS(stationary_points({-250, 100.0}), MergingPointsError);
  CHECK_THROWS_AS(stationary_points({0, 0.0}), DomainError);
  CHECK_NOTHROW(stationary_points({180, 100.0}));
  CHECK_THROWS_AS(phase_second_derivative({0, 1.0}, 5), DomainError);
}
