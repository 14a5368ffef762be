#include <gtest/gtest.h>

#include <string>

#include "adacons/error.hpp"
#include "adacons/scenario_file.hpp"

using namespace adacons;

#ifndef ADACONS_SCENARIO_DIR
#error "ADACONS_SCENARIO_DIR must point at the bundled scenarios"
#endif

namespace {

const std::string kDir = ADACONS_SCENARIO_DIR;

const char* kMinimal = R"(
[model]
A = [[0, 1], [0, 0]]
B = [[0], [1]]

[graph]
vertices = 3
mode = leader
edges = [[1, 2], [2, 3]]

[protocol]
variant = leader_robust
phi = 0.1
initial_gains = [1, 2]

[sim]
x0 = [0, 0, 0.1, 0, -0.1, 0.2]
t_end = 1
)";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  if (pos != std::string::npos) s.replace(pos, from.size(), to);
  return s;
}

std::string error_of(const std::string& text) {
  try {
    build_scenario(parse_scenario_config(text));
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(ScenarioFile, ReferenceFileParses) {
  const ScenarioConfig cfg = load_scenario_config(kDir + "/double_integrator_leader.scn");
  EXPECT_EQ(cfg.vertices, 7);
  EXPECT_EQ(cfg.mode, Mode::Leader);
  EXPECT_EQ(cfg.variant, Variant::LeaderRobust);
  ASSERT_EQ(cfg.edges.size(), 7u);
  EXPECT_EQ(cfg.edges.back(), (Edge{6, 1, 1.0}));
  ASSERT_EQ(cfg.disturbances.size(), 7u);
  EXPECT_EQ(cfg.disturbances[5].shape, DisturbanceShape(StateSineDisturbance{-0.2, 4, 0}));
  EXPECT_EQ(cfg.disturbances[4].shape, DisturbanceShape(ExpDecayDisturbance{-0.3, 2}));
  EXPECT_EQ(cfg.disturbances[0], DisturbanceSpec{});

  const Scenario s = build_scenario(cfg);
  EXPECT_EQ(s.n_agents(), 7);
  EXPECT_EQ(s.protocol.phi, std::vector<double>(6, 0.02));
  for (double c : s.protocol.initial_gains) {
    EXPECT_GE(c, 1.0);
    EXPECT_LE(c, 3.0);
  }
  EXPECT_LE(s.x0.cwiseAbs().maxCoeff(), 0.5);
  EXPECT_NEAR(s.design.k(0, 1), -1.7321, 1e-3);
}

TEST(ScenarioFile, RoundTripIsExact) {
  for (const char* name :
       {"double_integrator_leader.scn", "leaderless_cycle3.scn", "leaderless_five.scn"}) {
    const ScenarioConfig cfg = load_scenario_config(kDir + "/" + name);
    const std::string text = write_scenario_config(cfg);
    const ScenarioConfig back = parse_scenario_config(text);
    EXPECT_TRUE(back == cfg) << name;
    EXPECT_EQ(write_scenario_config(back), text);
  }
  ScenarioConfig cfg = parse_scenario_config(kMinimal);
  cfg.leaderless_offset = 3.25;
  cfg.plots = false;
  cfg.disturbances[1] = {SineDisturbance{0.1, 0.3, 1.0 / 3.0}, 0};
  EXPECT_TRUE(parse_scenario_config(write_scenario_config(cfg)) == cfg);
}

TEST(ScenarioFile, SeededDrawsAreReproducible) {
  const std::string path = kDir + "/double_integrator_leader.scn";
  const Scenario a = parse_scenario(path);
  const Scenario b = parse_scenario(path);
  EXPECT_EQ(a.x0, b.x0);
  EXPECT_EQ(a.protocol.initial_gains, b.protocol.initial_gains);
  const Scenario c = parse_scenario(path, {99, std::nullopt});
  EXPECT_NE(a.x0, c.x0);
  const Scenario h = parse_scenario(path, {std::nullopt, 5e-4});
  EXPECT_DOUBLE_EQ(h.sim.step_h, 5e-4);
  EXPECT_EQ(h.x0, a.x0);
}

TEST(ScenarioFile, ExplicitValuesAndDefaults) {
  const Scenario s = build_scenario(parse_scenario_config(kMinimal));
  EXPECT_EQ(s.protocol.initial_gains, (std::vector<double>{1, 2}));
  EXPECT_DOUBLE_EQ(s.sim.step_h, 1e-3);
  EXPECT_EQ(s.sim.record_every, 10);
  EXPECT_DOUBLE_EQ(s.x0(4), -0.1);
}

TEST(ScenarioFile, ErrorsNameSectionAndKey) {
  EXPECT_NE(error_of(replace(kMinimal, "t_end = 1", "t_end = 1\nspeed = 2")).find("[sim] speed"),
            std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "[sim]", "[simulation]")).find("simulation"), std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "B = [[0], [1]]", "B = [[0], [1], [2]]")).find("[model] B"),
            std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "vertices = 3\n", "")).find("[graph] vertices"),
            std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "x0 = [0, 0, 0.1, 0, -0.1, 0.2]", "x0 = [0, 0]"))
                .find("x0"),
            std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "phi = 0.1", "phi = 0")).find("robust variant requires positive phi"),
            std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "[[1, 2], [2, 3]]", "[[2, 1], [1, 2], [2, 3]]"))
                .find("Assumption 2"),
            std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "leader_robust", "leaderless_robust")).find("inconsistent"),
            std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "[sim]", "[disturbances]\n2 = exp_decay(amplitude = 1, rate = -1)\n\n[sim]"))
                .find("Assumption 1"),
            std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "[sim]", "[disturbances]\n2 = square(amplitude = 1)\n\n[sim]"))
                .find("[disturbances] 2"),
            std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "initial_gains = [1, 2]", "initial_gains = [1, 2]\ngain_seed = 4"))
                .find("exactly one"),
            std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "[model]", "[model]\nA = [[1]]")).find("duplicate"),
            std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "[[0], [1]]", "[[0], [1]")), "");
  // Unstable first mode that B cannot reach.
  EXPECT_NE(error_of(replace(kMinimal, "A = [[0, 1], [0, 0]]", "A = [[1, 0], [0, 1]]")).find("[model]"),
            std::string::npos);
}

TEST(ScenarioFile, LeaderlessOffsetKey) {
  ScenarioConfig cfg = load_scenario_config(kDir + "/leaderless_five.scn");
  EXPECT_FALSE(cfg.leaderless_offset.has_value());
  const std::string text = write_scenario_config(cfg);
  cfg = parse_scenario_config(replace(text, "leaderless_offset = beta", "leaderless_offset = 12.5"));
  EXPECT_EQ(cfg.leaderless_offset, 12.5);
}

TEST(ScenarioFile, MissingFile) {
  EXPECT_THROW(load_scenario_config(kDir + "/does_not_exist.scn"), Error);
}
