#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "platoon/envelope.hpp"
#include "platoon/verification.hpp"
#include "test_support.hpp"

using namespace platoon;
using platoon::test::deg;

namespace {

const Envelope kDist{0.7125, 1.25, 0.5, 0.0625};
const Envelope kBear{deg(45), deg(45), 0.5, deg(1.15)};

}  // namespace

TEST_CASE("derive_bounds") {
  const auto b = derive_bounds(0.75, test::reference_constraints());
  CHECK(b.m_lower_d == doctest::Approx(0.7125).epsilon(1e-15));
  CHECK(b.m_upper_d == 1.25);
  CHECK(b.m_beta == deg(45));

  const Constraints c{0.05, 2.0, deg(30)};
  const auto mid = derive_bounds((c.d_col + c.d_con) / 2, c);
  CHECK(mid.m_lower_d == doctest::Approx(mid.m_upper_d).epsilon(1e-15));
  CHECK(mid.m_lower_d == doctest::Approx((c.d_con - c.d_col) / 2).epsilon(1e-15));

  const auto e = derive_bounds(1.0, c);
  CHECK(e.m_lower_d == 0.95);
  CHECK(e.m_upper_d == 1.0);
  CHECK(e.m_beta == deg(30));

  CHECK_THROWS_AS(derive_bounds(0.05, c), ConfigError);
  CHECK_THROWS_AS(derive_bounds(2.0, c), ConfigError);
  CHECK_THROWS_AS(derive_bounds(3.0, c), ConfigError);
}

TEST_CASE("rho and rho_dot") {
  CHECK(rho(kDist, 0.0) == 1.0);
  CHECK(rho(kBear, 0.0) == 1.0);
  CHECK(rho(kDist, 1e4) == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(std::fabs(rho(kDist, 1.0) - 0.62620412672700175) < 1e-15);
  CHECK(rho_dot(kDist, 0.0) == doctest::Approx(-0.475).epsilon(1e-15));
  CHECK(std::fabs(rho_dot(kDist, 1e3)) < 1e-200);
  CHECK_THROWS_AS(rho(kDist, -1.0), DomainError);
  CHECK_THROWS_AS(rho_dot(kDist, -1.0), DomainError);
}

TEST_CASE("rho is strictly decreasing") {
  double prev = rho(kDist, 0.0);
  for (int k = 1; k <= 4000; ++k) {
    const double r = rho(kDist, k * 0.01);
    CHECK(r < prev);
    CHECK(r > 0.05);
    prev = r;
  }
}

TEST_CASE("normalize") {
  CHECK(normalize(0.0, 0.7) == 0.0);
  CHECK(normalize(0.3, 1.0) == 0.3);
  CHECK(std::fabs(normalize(0.3, 0.626204) - 0.47907710586326501) < 1e-15);
  CHECK(normalize(5.0, 1.0) == 5.0);  // out of band is not an error here
  CHECK_THROWS_AS(normalize(0.3, 0.0), DomainError);
  CHECK_THROWS_AS(normalize(0.3, -1.0), DomainError);
}

TEST_CASE("transform") {
  CHECK(transform(0.0, kDist) == 0.0);
  CHECK(std::fabs(transform(0.3, kDist) - 0.62583473253964890) < 1e-15);
  const Envelope sym{1.0, 1.0, 0.5, 0.1};
  CHECK(std::fabs(transform(0.5, sym) - 1.0986122886681097) < 1e-15);
  CHECK_THROWS_AS(transform(1.25, kDist), EnvelopeBreach);
  CHECK_THROWS_AS(transform(-0.7125, kDist), EnvelopeBreach);
  CHECK_THROWS_AS(transform(std::numeric_limits<double>::quiet_NaN(), kDist), EnvelopeBreach);
  try {
    transform(2.0, kDist);
    FAIL("expected a breach");
  } catch (const EnvelopeBreach& b) {
    CHECK(b.xi() == 2.0);
    CHECK(b.m_lower() == 0.7125);
    CHECK(b.m_upper() == 1.25);
  }
}

TEST_CASE("modulation") {
  CHECK(std::fabs(modulation(0.0, kDist) - 2.2035087719298246) < 1e-15);
  const Envelope b{deg(45), deg(45), 0.5, deg(1.15)};
  CHECK(std::fabs(modulation(deg(45) / 2, b) - 3.3953054526271005) < 1e-14);
  CHECK_THROWS_AS(modulation(1.25, kDist), EnvelopeBreach);

  double prev = 0.0;
  for (int k = 1; k <= 50; ++k) {
    const double xi = 1.25 * (1.0 - std::pow(0.5, k));
    const double r = modulation(xi, kDist);
    CHECK(r > prev);
    prev = r;
  }
  CHECK(prev > 1e14);
}

TEST_CASE("transform increasing; modulation minimal at the denominator's stationary point") {
  for (const Envelope& env : {kDist, kBear}) {
    const auto grid = envelope_grid(env, 10001, 0.999);
    // (1 + xi/ml)(1 - xi/mu) peaks at xi* = (mu - ml) / 2, where r = 4 / (ml + mu).
    const double xi_star = (env.m_upper - env.m_lower) / 2;
    const double r_star = modulation(xi_star, env);
    CHECK(r_star == doctest::Approx(4.0 / (env.m_lower + env.m_upper)).epsilon(1e-15));
    double prev = -std::numeric_limits<double>::infinity();
    for (double xi : grid) {
      const double eps = transform(xi, env);
      CHECK(eps > prev);
      prev = eps;
      CHECK(modulation(xi, env) >= r_star * (1 - 1e-15));
    }
  }
  // With equal bounds the minimum is r(0) = 1/ml + 1/mu.
  for (double xi : envelope_grid(kBear, 1001, 0.999))
    CHECK(modulation(xi, kBear) >= (2.0 / kBear.m_lower) * (1 - 1e-15));
  // With unequal bounds it dips below that value.
  CHECK(modulation((kDist.m_upper - kDist.m_lower) / 2, kDist) < 1.0 / kDist.m_lower + 1.0 / kDist.m_upper);
}

TEST_CASE("central-difference derivative identity") {
  // The two-point stencil's truncation error grows like h^2 / dist^2 toward the
  // poles, so the 1e-6 bound holds on the central 99 % of the band.
  for (const Envelope& env : {kDist, kBear}) {
    const double h = 1e-6 * (env.m_lower + env.m_upper);
    for (double xi : envelope_grid(env, 10001, 0.99)) {
      const double fd = (transform(xi + h, env) - transform(xi - h, env)) / (2 * h);
      const double r = modulation(xi, env);
      CHECK(std::fabs(r - fd) <= 1e-6 * r);
    }
  }
}

TEST_CASE("library derivative and round-trip checks pass on the full 99.9 % grids") {
  for (const Envelope& env : {kDist, kBear}) {
    const auto d = check_derivative_identity(env, "env");
    CHECK_MESSAGE(d.pass, d.residual);
    const auto r = check_round_trip(env, "env");
    CHECK_MESSAGE(r.pass, r.residual);
  }
}

TEST_CASE("round trip and bijection") {
  for (const Envelope& env : {kDist, kBear}) {
    for (double xi : envelope_grid(env, 10001, 0.999)) {
      const double back = inverse_transform(transform(xi, env), env);
      if (xi == 0.0)
        CHECK(back == 0.0);
      else
        CHECK(std::fabs(back - xi) <= 1e-12 * std::fabs(xi));
    }
    for (double eps : {-800.0, -40.0, -1.0, 0.0, 1.0, 40.0, 800.0}) {
      const double xi = inverse_transform(eps, env);
      CHECK(std::isfinite(xi));
      CHECK(xi >= -env.m_lower);
      CHECK(xi <= env.m_upper);
    }
  }
}

TEST_CASE("check_envelope") {
  CHECK(check_envelope(0.0, kDist, 3.0));
  CHECK_FALSE(check_envelope(1.25, kDist, 0.0));
  CHECK_FALSE(check_envelope(-0.7125, kDist, 0.0));
  CHECK(check_envelope(std::nextafter(1.25, 0.0), kDist, 0.0));
  CHECK(check_envelope(0.06, kDist, 1e3));
  CHECK_FALSE(check_envelope(0.07, kDist, 1e3));
  CHECK(check_envelope(-0.0356, kDist, 1e3));  // lower side: 0.7125 * 0.05
  CHECK_FALSE(check_envelope(-0.0357, kDist, 1e3));
}

TEST_CASE("check_envelope agrees exactly with the transform's domain") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> time(0.0, 30.0), frac(-1.0, 1.0);
  for (const Envelope& env : {kDist, kBear}) {
    for (int k = 0; k < 50000; ++k) {
      const double t = time(rng);
      const double r = rho(env, t);
      // concentrate samples on the boundary, where rounding matters
      double e = (k % 2 ? env.m_upper : -env.m_lower) * r;
      if (k % 4 >= 2) e = std::nextafter(e, k % 3 ? 10.0 : -10.0);
      if (k % 7 == 0) e = frac(rng) * 1.5 * env.m_max() * r;
      bool defined = true;
      try {
        (void)transform(normalize(e, r), env);
      } catch (const EnvelopeBreach&) {
        defined = false;
      }
      CHECK(check_envelope(e, env, t) == defined);
    }
  }
}

TEST_CASE("envelope parameter validation") {
  CHECK_NOTHROW(kDist.validate());
  CHECK_THROWS_AS((Envelope{0.0, 1.0, 0.5, 0.1}).validate(), ConfigError);
  CHECK_THROWS_AS((Envelope{1.0, 1.0, 0.0, 0.1}).validate(), ConfigError);
  CHECK_THROWS_AS((Envelope{1.0, 1.0, 0.5, 1.0}).validate(), ConfigError);
  CHECK_THROWS_AS((Envelope{1.0, 1.0, 0.5, 0.0}).validate(), ConfigError);
}

TEST_CASE("validate_initial") {
  const EnvelopePair pair{kDist, kBear};
  const std::array<EnvelopePair, 3> envs{pair, pair, pair};
  const std::array<double, 3> zero{0.0, 0.0, 0.0};
  CHECK_NOTHROW(validate_initial(zero, zero, envs));

  const std::array<double, 3> beta44{0.0, deg(44), 0.0};
  CHECK_NOTHROW(validate_initial(zero, beta44, envs));

  // d(0) = d_con puts e_d(0) exactly on the upper bound
  const std::array<double, 3> at_con{0.0, 0.0, 1.25};
  const std::array<double, 3> bad_beta{deg(45), 0.0, 0.0};
  try {
    validate_initial(at_con, bad_beta, envs);
    FAIL("expected rejection");
  } catch (const InitialFeasibilityError& e) {
    REQUIRE(e.violations().size() == 2);
    CHECK(e.violations()[0] == InitialViolation{1, Channel::bearing, deg(45), -deg(45), deg(45)});
    CHECK(e.violations()[1] == InitialViolation{3, Channel::distance, 1.25, -0.7125, 1.25});
    CHECK(e.problems().size() == 2);
    CHECK(std::string(e.what()).find("vehicle 3") != std::string::npos);
  }
}

TEST_CASE("initial check matches the envelope check at t = 0") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ed(-1.0, 1.5), eb(-1.0, 1.0);
  for (int k = 0; k < 5000; ++k) {
    const std::array<double, 1> d{ed(rng)}, b{eb(rng)};
    const std::array<EnvelopePair, 1> env{EnvelopePair{kDist, kBear}};
    const bool expected = check_envelope(d[0], kDist, 0.0) && check_envelope(b[0], kBear, 0.0);
    CHECK(find_initial_violations(d, b, env).empty() == expected);
  }
}
