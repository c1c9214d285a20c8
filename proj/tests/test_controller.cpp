#include <doctest.h>

#include <cmath>
#include <random>

#include "platoon/controller.hpp"
#include "test_support.hpp"

using namespace platoon;
using platoon::test::deg;

namespace {

ControllerParams reference_params(double k_d = 0.005, double k_beta = 0.001) {
  return make_controller_params(k_d, k_beta, 0.75, test::reference_constraints(), 0.5, 0.0625, 0.5, deg(1.15));
}

}  // namespace

TEST_CASE("error definitions") {
  CHECK(distance_error({0.75, 0.0}, 0.75) == 0.0);
  CHECK(distance_error({1.05, 0.0}, 0.75) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(bearing_error({1.0, 0.1}) == 0.1);
}

TEST_CASE("make_controller_params derives the envelope bounds") {
  const auto p = reference_params();
  CHECK(p.env.distance.m_lower == doctest::Approx(0.7125).epsilon(1e-15));
  CHECK(p.env.distance.m_upper == 1.25);
  CHECK(p.env.bearing.m_lower == deg(45));
  CHECK(p.env.bearing.m_upper == deg(45));
  CHECK(p.env.bearing.rho_inf == deg(1.15));
  CHECK_THROWS_AS(reference_params(0.0), ConfigError);
  CHECK_THROWS_AS(reference_params(0.005, -1.0), ConfigError);
  CHECK_THROWS_AS(make_controller_params(0.005, 0.001, 2.5, test::reference_constraints(), 0.5, 0.0625, 0.5, 0.02),
                  ConfigError);
}

TEST_CASE("linear_velocity") {
  const auto p = reference_params();
  CHECK(linear_velocity(0.0, 0.0, p) == 0.0);
  CHECK(std::fabs(linear_velocity(0.3, 0.0, p) - 0.0031291736626982445) < 1e-15);
  CHECK(linear_velocity(-0.3, 0.0, p) < 0.0);
  CHECK(linear_velocity(0.3, 0.0, p) > 0.0);
}

TEST_CASE("angular_velocity") {
  const auto p = reference_params();
  CHECK(angular_velocity(0.0, 2.0, p) == 0.0);
  // xi = M_beta / 2 at t = 0, where rho_beta = 1
  CHECK(std::fabs(angular_velocity(deg(45) / 2, 0.0, p) - 0.0037301242940379710) < 1e-15);
  CHECK(angular_velocity(-deg(10), 0.0, p) < 0.0);
}

TEST_CASE("controller_step") {
  const auto p = reference_params();
  CHECK(controller_step({0.75, 0.0}, 0.0, p) == ControlInput{0.0, 0.0});
  CHECK(controller_step({0.75, 0.0}, 17.3, p) == ControlInput{0.0, 0.0});
  const auto u = controller_step({1.05, 0.0}, 0.0, p);
  CHECK(std::fabs(u.v - 0.0031291736626982445) < 1e-15);
  CHECK(u.omega == 0.0);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(0.3, 1.5), b(-0.5, 0.5), t(0.0, 0.5);
  for (int k = 0; k < 1000; ++k) {
    const Measurement m{d(rng), b(rng)};
    const double tt = t(rng);
    const ControlInput a = controller_step(m, tt, p);
    const ControlInput c = controller_step(m, tt, p);
    CHECK(test::same_bits(a.v, c.v));
    CHECK(test::same_bits(a.omega, c.omega));
  }
}

TEST_CASE("breaches carry channel and time") {
  const auto p = reference_params();
  try {
    controller_step({0.75 + 1.3, 0.0}, 0.0, p);
    FAIL("expected a breach");
  } catch (const EnvelopeBreach& b) {
    CHECK(b.channel() == Channel::distance);
    CHECK(b.time() == 0.0);
  }
  try {
    controller_step({0.75, deg(2)}, 20.0, p);  // band is +-1.15 deg near steady state
    FAIL("expected a breach");
  } catch (const EnvelopeBreach& b) {
    CHECK(b.channel() == Channel::bearing);
    CHECK(b.time() == 20.0);
  }
}

TEST_CASE("soft guard downgrades only near-boundary breaches") {
  auto p = reference_params();
  p.soft_guard = 1e-9;
  const double v_edge = linear_velocity(1.25 + 5e-10, 0.0, p);
  CHECK(v_edge == p.k_d * transform(1.25 - 1e-9, p.env.distance));
  CHECK_THROWS_AS(linear_velocity(1.25 + 1e-6, 0.0, p), EnvelopeBreach);
  p.soft_guard = 0.0;
  CHECK_THROWS_AS(linear_velocity(1.25 + 5e-10, 0.0, p), EnvelopeBreach);
}

TEST_CASE("gain scaling is exact") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ed(-0.7, 1.2), eb(-0.78, 0.78), alpha(0.1, 10.0);
  const auto p = reference_params();
  for (int k = 0; k < 1000; ++k) {
    const double e_d = ed(rng), e_b = eb(rng);
    auto q = p;
    q.k_d *= 2;
    q.k_beta *= 2;
    const double v = linear_velocity(e_d, 0.0, p), w = angular_velocity(e_b, 0.0, p);
    CHECK(linear_velocity(e_d, 0.0, q) == 2 * v);
    CHECK(angular_velocity(e_b, 0.0, q) == 2 * w);

    const double a = alpha(rng);
    auto s = p;
    s.k_d *= a;
    s.k_beta *= a;
    // a general factor is exact up to the rounding of the two products
    CHECK(std::fabs(linear_velocity(e_d, 0.0, s) - a * v) <= 5e-16 * std::fabs(a * v));
    CHECK(std::fabs(angular_velocity(e_b, 0.0, s) - a * w) <= 5e-16 * std::fabs(a * w));
  }
}

TEST_CASE("bounded on closed sub-bands") {
  const auto p = reference_params();
  for (double t : {0.0, 1.0, 5.0, 30.0}) {
    const double rd = rho(p.env.distance, t), rb = rho(p.env.bearing, t);
    const double frac = 0.9;
    const double eps_max_d = std::max(transform(frac * 1.25, p.env.distance),
                                      -transform(-frac * p.env.distance.m_lower, p.env.distance));
    const double eps_max_b = transform(frac * deg(45), p.env.bearing);
    const double r_max_b = modulation(frac * deg(45), p.env.bearing);
    for (int k = -1000; k <= 1000; ++k) {
      const double s = frac * k / 1000.0;
      const double e_d = (s >= 0 ? s * 1.25 : s * p.env.distance.m_lower) * rd;
      const double e_b = s * deg(45) * rb;
      CHECK(std::fabs(linear_velocity(e_d, t, p)) <= p.k_d * eps_max_d * (1 + 1e-12));
      CHECK(std::fabs(angular_velocity(e_b, t, p)) <= p.k_beta * r_max_b * eps_max_b / rb * (1 + 1e-12));
    }
  }
}

TEST_CASE("continuous across adjacent grid samples") {
  const auto p = reference_params(0.5, 0.001);
  const int n = 20000;
  const double h = 0.9 * 2 * deg(45) / n;
  double prev_w = angular_velocity(-0.9 * deg(45), 0.0, p);
  double max_jump = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double e = -0.9 * deg(45) + k * h;
    const double w = angular_velocity(e, 0.0, p);
    max_jump = std::max(max_jump, std::fabs(w - prev_w));
    prev_w = w;
  }
  // Lipschitz constant on the sub-band: d omega / d e = k_beta (r' eps + r^2) / rho^2, bounded at 0.9 M
  const Envelope& env = p.env.bearing;
  const double xi = 0.9 * deg(45);
  const double r = modulation(xi, env);
  const double r_prime = r * (1 / (env.m_upper - xi) - 1 / (env.m_lower + xi));
  const double lipschitz = p.k_beta * (r_prime * transform(xi, env) + r * r);
  CHECK(max_jump <= lipschitz * h * 1.01);
}
