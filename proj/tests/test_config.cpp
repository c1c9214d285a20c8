#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "platoon/config.hpp"
#include "platoon/errors.hpp"
#include "test_support.hpp"

using namespace platoon;
using platoon::test::deg;

namespace {

std::string bundled(const std::string& name) {
  std::ifstream in(std::string(PLATOON_SOURCE_DIR) + "/configs/" + name);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> problems_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.problems();
  }
  return {};
}

bool mentions(const std::vector<std::string>& problems, const std::string& needle) {
  return std::any_of(problems.begin(), problems.end(),
                     [&](const std::string& p) { return p.find(needle) != std::string::npos; });
}

std::string with(const std::string& pointer, const nlohmann::json& value) {
  auto j = nlohmann::json::parse(bundled("scenario_sec4.json"));
  j[nlohmann::json::json_pointer(pointer)] = value;
  return j.dump();
}

}  // namespace

TEST_CASE("parse_quantity") {
  CHECK(parse_quantity("0.75 m", Dimension::length, "k") == 0.75);
  CHECK(parse_quantity("75 cm", Dimension::length, "k") == 0.75);
  CHECK(parse_quantity("37.5mm", Dimension::length, "k") == 0.0375);
  CHECK(parse_quantity("1 ms", Dimension::time, "k") == 1e-3);
  CHECK(parse_quantity("60 s", Dimension::time, "k") == 60.0);
  CHECK(parse_quantity("45 deg", Dimension::angle, "k") == deg(45));
  CHECK(parse_quantity("0.5 rad", Dimension::angle, "k") == 0.5);
  CHECK(parse_quantity("0.3 m/s", Dimension::speed, "k") == 0.3);
  CHECK(parse_quantity("0.2 rad/s", Dimension::angular_rate, "k") == 0.2);
  CHECK(parse_quantity("0.5 1/s", Dimension::rate, "k") == 0.5);
  CHECK_THROWS_AS(parse_quantity("45", Dimension::angle, "k"), ConfigError);
  CHECK_THROWS_AS(parse_quantity("45 m", Dimension::angle, "k"), ConfigError);
  CHECK_THROWS_AS(parse_quantity("deg", Dimension::angle, "k"), ConfigError);
  CHECK_THROWS_AS(parse_quantity("4x5 deg", Dimension::angle, "k"), ConfigError);
  try {
    parse_quantity("12", Dimension::length, "constraints.d_con");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("constraints.d_con") != std::string::npos);
  }
}

TEST_CASE("format_quantity reads back exactly") {
  for (double v : {0.75, 0.1, 1.0 / 3.0, deg(45), 1e-3, 0.0, -2.5e-7}) {
    for (auto dim : {Dimension::length, Dimension::angle, Dimension::time, Dimension::speed}) {
      CHECK(parse_quantity(format_quantity(v, dim), dim, "k") == v);
    }
  }
}

TEST_CASE("bundled reference config parses to the reference scenario") {
  const Config c = parse_config(bundled("scenario_sec4.json"));
  CHECK(c == reference_config(false));
  const Config r = parse_config(bundled("scenario_sec4_rescaled_gain.json"));
  CHECK(r == reference_config(true));
  CHECK_NOTHROW(scenario_from_config(c));
}

TEST_CASE("empty file lists every missing required key") {
  const auto problems = problems_of("");
  CHECK(problems == problems_of("{}"));
  for (const char* key : {"schema_version", "platoon.followers", "platoon.desired_distance", "platoon.initial",
                          "leader.trajectory", "constraints.d_col", "constraints.d_con", "constraints.beta_con",
                          "camera.range", "camera.angle_of_view", "controller.k_d", "controller.k_beta",
                          "controller.l_d", "controller.l_beta", "controller.rho_inf_d", "controller.rho_inf_beta",
                          "simulation.dt", "simulation.duration"})
    CHECK_MESSAGE(mentions(problems, key), key);
}

TEST_CASE("strict keys and units") {
  CHECK(mentions(problems_of(with("/constraints/bogus", 1)), "unknown key 'constraints.bogus'"));
  CHECK(mentions(problems_of(with("/constraints/beta_con", 45)), "constraints.beta_con"));
  CHECK(mentions(problems_of(with("/constraints/beta_con", "45")), "constraints.beta_con"));
  CHECK(mentions(problems_of(with("/simulation/integrator", "midpoint")), "simulation.integrator"));
  CHECK_FALSE(problems_of("{ not json").empty());

  // several problems at once are all reported
  auto j = nlohmann::json::parse(bundled("scenario_sec4.json"));
  j["camera"]["range"] = "2";
  j["extra"] = true;
  const auto problems = problems_of(j.dump());
  CHECK(problems.size() == 2);
}

TEST_CASE("degrees and radians give the same config") {
  const Config a = parse_config(with("/constraints/beta_con", "45 deg"));
  const Config b = parse_config(with("/constraints/beta_con", "0.7853982 rad"));
  CHECK(std::fabs(a.constraints.beta_con - b.constraints.beta_con) < 1e-7);
  const Config c = parse_config(with("/constraints/beta_con", "0.7853981633974483 rad"));
  CHECK(a == c);
}

TEST_CASE("serialize then parse is the identity") {
  for (const Config& c : {reference_config(false), reference_config(true)}) {
    CHECK(parse_config(serialize_config(c)) == c);
  }
  Config c = reference_config(true);
  c.leader = PiecewiseSchedule{{{0.0, 0.1, 0.0}, {2.5, 0.3, -0.05}}};
  c.leader_pose = {1.0, -0.5, deg(10)};
  c.initial = std::vector<Pose>{{-0.75, 0, 0}, {-1.5, 0.01, 0.02}, {-2.25, 0, 0},  {-3, 0, 0},
                                {-3.75, 0, 0}, {-4.5, 0, 0},       {-5.25, 0, 0}};
  c.overrides = {{3, 0.4, std::nullopt, 0.8}, {5, std::nullopt, 0.002, std::nullopt}};
  c.integrator = Integrator::euler;
  c.breach_policy = BreachPolicy::record;
  c.saturation = {1.0, 2.0, true};
  c.controller.soft_guard = 1e-9;
  c.output = {"a.csv", "b.json", false, 7};
  const Config back = parse_config(serialize_config(c));
  CHECK(back == c);
  CHECK(parse_config(serialize_config(back)) == c);
}

TEST_CASE("overrides expand into per-vehicle parameters") {
  Config c = reference_config(true);
  c.overrides = {{2, 0.25, std::nullopt, 0.9}};
  const ScenarioSpec spec = to_scenario_spec(c);
  REQUIRE(spec.params.size() == 7);
  CHECK(spec.params[1].k_d == 0.25);
  CHECK(spec.params[1].d_des == 0.9);
  CHECK(spec.params[1].env.distance.m_upper == 2.0 - 0.9);
  CHECK(spec.params[0].k_d == 0.5);
  CHECK(spec.params[2].d_des == 0.75);

  c.overrides = {{9, 0.25, std::nullopt, std::nullopt}};
  CHECK_THROWS_AS(to_scenario_spec(c), ConfigError);
  c.overrides = {{1, std::nullopt, std::nullopt, 3.0}};
  CHECK_THROWS_AS(to_scenario_spec(c), ConfigError);
}

TEST_CASE("configs that violate the constraints are rejected at scenario build") {
  Config c = reference_config();
  c.initial = std::vector<RelativePlacement>(7, {2.0, 0.0, 0.0});
  CHECK_THROWS_AS(scenario_from_config(c), InitialFeasibilityError);
  c = reference_config();
  c.camera.range = 1.0;
  CHECK_THROWS_AS(scenario_from_config(c), ConfigError);
}
