#include <doctest.h>

#include <cmath>
#include <random>

#include "platoon/errors.hpp"
#include "platoon/geometry.hpp"
#include "test_support.hpp"

using namespace platoon;
using platoon::test::deg;

TEST_CASE("relative_measurement examples") {
  auto m = relative_measurement({0, 0, 0}, {1, 0, 0.3});
  CHECK(m.d == 1.0);
  CHECK(m.beta == 0.0);

  m = relative_measurement({0, 0, 0}, {1, 1, -2.0});
  CHECK(m.d == std::sqrt(2.0));
  CHECK(m.beta == doctest::Approx(kPi / 4).epsilon(1e-15));

  m = relative_measurement({0, 0, kPi / 2}, {0, 2, 0});
  CHECK(m.d == 2.0);
  CHECK(m.beta == 0.0);
}

TEST_CASE("bearing sign: predecessor to the left is positive") {
  CHECK(relative_measurement({0, 0, 0}, {1, 0.1, 0}).beta > 0);
  CHECK(relative_measurement({0, 0, 0}, {1, -0.1, 0}).beta < 0);
  CHECK(relative_measurement({0, 0, 0}, {-1, 0, 0}).beta == kPi);
}

TEST_CASE("coincident positions are degenerate") {
  CHECK_THROWS_AS(relative_measurement({1, 2, 0}, {1, 2, 1}), DegenerateGeometry);
}

TEST_CASE("relative_heading") {
  CHECK(relative_heading({0, 0, 0.4}, {5, 5, 0.4}) == 0.0);
  CHECK(relative_heading({0, 0, kPi / 2}, {1, 0, 0}) == kPi / 2);
  CHECK(std::fabs(relative_heading({0, 0, -3}, {1, 0, 3}) - 0.28318530717958648) < 1e-15);
}

TEST_CASE("camera_visibility") {
  const CameraModel cam{2.0, deg(90)};
  CHECK(camera_visibility({1.0, 0.0}, cam) == Visibility::visible);
  CHECK(camera_visibility({2.5, 0.0}, cam) == Visibility::out_of_range);
  CHECK(camera_visibility({1.0, deg(50)}, cam) == Visibility::out_of_fov);
  CHECK(camera_visibility({1.0, -deg(50)}, cam) == Visibility::out_of_fov);
  CHECK(camera_visibility({2.5, deg(50)}, cam) == Visibility::out_of_range);
}

TEST_CASE("constraint_status boundaries are violations") {
  const Constraints c = test::reference_constraints();
  CHECK(constraint_status({0.75, 0.0}, c) == ConstraintStatus::ok);
  CHECK(constraint_status({0.0375, 0.0}, c) == ConstraintStatus::collision);
  CHECK(constraint_status({1.0, deg(45)}, c) == ConstraintStatus::connectivity_break);
  CHECK(constraint_status({2.0, 0.0}, c) == ConstraintStatus::connectivity_break);
  CHECK(constraint_status({1.0, -deg(45)}, c) == ConstraintStatus::connectivity_break);
  CHECK(constraint_status({std::nextafter(2.0, 0.0), std::nextafter(deg(45), 0.0)}, c) == ConstraintStatus::ok);
  // collision wins over a simultaneous connectivity break
  CHECK(constraint_status({0.01, deg(60)}, c) == ConstraintStatus::collision);
}

TEST_CASE("status and visibility names round-trip") {
  for (auto s : {ConstraintStatus::ok, ConstraintStatus::collision, ConstraintStatus::connectivity_break})
    CHECK(parse_constraint_status(to_string(s)) == s);
  CHECK_THROWS_AS(parse_constraint_status("fine"), ConfigError);
  CHECK(std::string(to_string(Visibility::out_of_fov)) == "out_of_fov");
}

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(test::reference_constraints().validate());
  CHECK_THROWS_AS((Constraints{2.0, 1.0, 0.5}).validate(), ConfigError);
  CHECK_THROWS_AS((Constraints{0.0, 1.0, 0.5}).validate(), ConfigError);
  CHECK_THROWS_AS((Constraints{0.1, 1.0, kPi / 2}).validate(), ConfigError);
  CHECK_NOTHROW((CameraModel{2.0, deg(90)}).validate());
  CHECK_THROWS_AS((CameraModel{0.0, deg(90)}).validate(), ConfigError);
  CHECK_THROWS_AS((CameraModel{2.0, kPi}).validate(), ConfigError);
}

TEST_CASE("rigid-motion invariance") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(-kPi, kPi), pos(-20, 20), off(-3, 3);
  for (int k = 0; k < 2000; ++k) {
    const Pose f{pos(rng), pos(rng), ang(rng)};
    const Pose p{f.x + off(rng), f.y + off(rng), ang(rng)};
    const double th = ang(rng), tx = pos(rng), ty = pos(rng);
    auto move = [&](const Pose& q) {
      return Pose{std::cos(th) * q.x - std::sin(th) * q.y + tx, std::sin(th) * q.x + std::cos(th) * q.y + ty,
                  wrap_angle(q.phi + th)};
    };
    const auto m0 = relative_measurement(f, p);
    const auto m1 = relative_measurement(move(f), move(p));
    CHECK(std::fabs(m0.d - m1.d) < 1e-12);
    CHECK(std::fabs(wrap_angle(m0.beta - m1.beta)) < 1e-12);
    CHECK(std::fabs(wrap_angle(relative_heading(f, p) - relative_heading(move(f), move(p)))) < 1e-12);
  }
}

TEST_CASE("ok status implies visibility when the constraints fit the camera") {
  const Constraints c = test::reference_constraints();
  const CameraModel cam{2.0, deg(90)};
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> dist(0.0, 3.0), bear(-kPi, kPi);
  int ok = 0;
  for (int k = 0; k < 20000; ++k) {
    const Measurement m{dist(rng), bear(rng)};
    if (constraint_status(m, c) == ConstraintStatus::ok) {
      ++ok;
      CHECK(camera_visibility(m, cam) == Visibility::visible);
    }
  }
  CHECK(ok > 1000);
}
