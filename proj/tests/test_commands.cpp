#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "adacons/commands.hpp"
#include "adacons/report.hpp"
#include "json.hpp"

using namespace adacons;
namespace fs = std::filesystem;

namespace {

const std::string kDir = ADACONS_SCENARIO_DIR;
const std::string kReference = kDir + "/double_integrator_leader.scn";

class Commands : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("adacons_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const ScenarioConfig& cfg, const std::string& name = "s.scn") {
    const fs::path p = dir_ / name;
    std::ofstream(p) << write_scenario_config(cfg);
    return p.string();
  }
  std::string out(const std::string& sub = "out") const { return (dir_ / sub).string(); }

  static std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }

  fs::path dir_;
  std::ostringstream so_, se_;
};

ScenarioConfig reference(double t_end = 10) {
  ScenarioConfig cfg = load_scenario_config(kReference);
  cfg.sim.t_end = t_end;
  return cfg;
}

}  // namespace

TEST_F(Commands, RunWritesArtifacts) {
  const std::string path = write(reference());
  ASSERT_EQ(cmd_run(path, out(), {}, so_, se_), kExitOk) << se_.str();
  const fs::path o = out();
  for (const char* f : {"trajectory.csv", "report.txt", "summary.json", "err_norm.svg", "gains.svg"})
    EXPECT_TRUE(fs::exists(o / f)) << f;

  std::ifstream csv(o / "trajectory.csv");
  std::string header;
  std::getline(csv, header);
  const int columns = static_cast<int>(std::count(header.begin(), header.end(), ',')) + 1;
  EXPECT_EQ(columns, 1 + 7 * 2 + 6 + 2);

  std::ifstream again(o / "trajectory.csv");
  const Trajectory tr = read_csv(again);
  EXPECT_EQ(tr.size(), 1001u);

  const nlohmann::json j = nlohmann::json::parse(slurp(o / "summary.json"));
  EXPECT_TRUE(j["containment"]["contained"].get<bool>());
  EXPECT_EQ(j["trajectory"]["samples"].get<int>(), 1001);
  EXPECT_EQ(slurp(o / "report.txt"), so_.str());
  EXPECT_NE(slurp(o / "gains.svg").find("<svg"), std::string::npos);
}

TEST_F(Commands, RunIsDeterministic) {
  const std::string path = write(reference(3));
  ASSERT_EQ(cmd_run(path, out("a"), {}, so_, se_), kExitOk);
  ASSERT_EQ(cmd_run(path, out("b"), {}, so_, se_), kExitOk);
  EXPECT_EQ(slurp(fs::path(out("a")) / "trajectory.csv"), slurp(fs::path(out("b")) / "trajectory.csv"));
}

TEST_F(Commands, PlotToggleOff) {
  ScenarioConfig cfg = reference(1);
  cfg.plots = false;
  ASSERT_EQ(cmd_run(write(cfg), out(), {}, so_, se_), kExitOk);
  for (const auto& e : fs::directory_iterator(out())) EXPECT_NE(e.path().extension(), ".svg");
}

TEST_F(Commands, DivergenceExitCode) {
  ScenarioConfig cfg = reference(10);
  cfg.disturbances[1] = {SineDisturbance{5e3, 1, 0}};
  cfg.sim.step_h = 0.5;
  cfg.sim.record_every = 1;
  EXPECT_EQ(cmd_run(write(cfg), out(), {}, so_, se_), kExitDivergence);
  EXPECT_NE(se_.str().find("divergence at t ="), std::string::npos);
  EXPECT_NE(se_.str().find("agent"), std::string::npos);
}

TEST_F(Commands, ValidationExitCode) {
  const fs::path p = dir_ / "bad.scn";
  std::ofstream(p) << "[model]\nA = [[0]]\n";
  EXPECT_EQ(cmd_run(p.string(), out(), {}, so_, se_), kExitValidation);
  EXPECT_NE(se_.str().find("[graph]"), std::string::npos);
}

TEST_F(Commands, BoundsReference) {
  ASSERT_EQ(cmd_bounds(kReference, {}, so_, se_), kExitOk);
  EXPECT_NE(so_.str().find("radius_sq"), std::string::npos);
  EXPECT_EQ(so_.str().find("inapplicable"), std::string::npos);
}

TEST_F(Commands, BoundsReportMatchesModules) {
  const ScenarioConfig cfg = reference();
  const Scenario s = build_scenario(cfg);
  const RunReport r = analyze(s, cfg);
  const LeaderConstants lc = leader_constants(partition_leader(laplacian(s.graph)));
  const LeaderBound b =
      leader_bound(lc, s.design, s.protocol.phi, {0, 0.2, 0.1, 0.2, 0.3, 0.2, 0});
  ASSERT_TRUE(r.leader_bound.has_value());
  EXPECT_NEAR(r.leader_constants->lambda_hat0, lc.lambda_hat0, 1e-12);
  EXPECT_NEAR(r.leader_bound->radius_sq, b.radius_sq, 1e-12 * b.radius_sq);
  EXPECT_NEAR(r.leader_bound->alpha, b.alpha, 1e-12 * b.alpha);
  EXPECT_NEAR(r.design.tau, s.design.tau, 1e-12);
  EXPECT_TRUE(std::isfinite(*r.radius_sq()));
}

TEST_F(Commands, BoundsInapplicable) {
  ScenarioConfig cfg = reference();
  cfg.phi = {0.5};
  ASSERT_EQ(cmd_bounds(write(cfg), {}, so_, se_), kExitOk);
  EXPECT_NE(so_.str().find("inapplicable: delta >= tau"), std::string::npos);
}

TEST_F(Commands, BoundsLeaderlessCycle) {
  ScenarioConfig cfg = load_scenario_config(kDir + "/leaderless_cycle3.scn");
  cfg.variant = Variant::LeaderlessRobust;
  cfg.phi = {0.02};
  ASSERT_EQ(cmd_bounds(write(cfg), {}, so_, se_), kExitOk) << se_.str();
  EXPECT_NE(so_.str().find("lambda2_hat 1\n"), std::string::npos) << so_.str();
  EXPECT_NE(so_.str().find("beta        74\n"), std::string::npos) << so_.str();
}

TEST_F(Commands, BoundsRefusesNonRobust) {
  EXPECT_EQ(cmd_bounds(kDir + "/leaderless_cycle3.scn", {}, so_, se_), kExitValidation);
  EXPECT_NE(se_.str().find("no residual-set guarantee"), std::string::npos);
}

TEST_F(Commands, DriftDemoReference) {
  ASSERT_EQ(cmd_drift_demo(kReference, out(), {}, so_, se_), kExitOk) << se_.str();
  const nlohmann::json j = nlohmann::json::parse(slurp(fs::path(out()) / "drift_summary.json"));
  EXPECT_GT(j["nonrobust"]["cmax_end"].get<double>(), j["robust"]["cmax_end"].get<double>());
  EXPECT_TRUE(j["nonrobust"]["nondecreasing"].get<bool>());
  EXPECT_TRUE(j["contrast"].get<bool>());
  for (const char* f : {"drift_report.txt", "robust.csv", "nonrobust.csv", "gains_robust.svg",
                        "gains_nonrobust.svg"})
    EXPECT_TRUE(fs::exists(fs::path(out()) / f)) << f;
}

TEST_F(Commands, DriftDemoWithoutDisturbancesSettles) {
  ScenarioConfig cfg = reference(60);
  cfg.disturbances.assign(7, DisturbanceSpec{});
  ASSERT_EQ(cmd_drift_demo(write(cfg), out(), {}, so_, se_), kExitOk) << se_.str();
  const nlohmann::json j = nlohmann::json::parse(slurp(fs::path(out()) / "drift_summary.json"));
  EXPECT_EQ(j["robust"]["verdict"], "settled");
  EXPECT_EQ(j["nonrobust"]["verdict"], "settled");
  EXPECT_FALSE(j["persistent_disturbances"].get<bool>());
}

TEST_F(Commands, DriftDemoDecayingOnly) {
  ScenarioConfig cfg = reference(60);
  cfg.disturbances.assign(7, DisturbanceSpec{});
  cfg.disturbances[4] = {ExpDecayDisturbance{-0.3, 2}};
  ASSERT_EQ(cmd_drift_demo(write(cfg), out(), {}, so_, se_), kExitOk) << se_.str();
  const nlohmann::json j = nlohmann::json::parse(slurp(fs::path(out()) / "drift_summary.json"));
  EXPECT_NE(j["nonrobust"]["verdict"], "growing");
  EXPECT_TRUE(j["nonrobust"]["nondecreasing"].get<bool>());
}

TEST_F(Commands, DriftDemoRejectsNonRobust) {
  EXPECT_EQ(cmd_drift_demo(kDir + "/leaderless_cycle3.scn", out(), {}, so_, se_), kExitValidation);
}

TEST_F(Commands, MissingScenarioFile) {
  EXPECT_NE(cmd_run((dir_ / "nope.scn").string(), out(), {}, so_, se_), kExitOk);
}
