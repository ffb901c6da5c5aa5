#include <alvec/experiment.hpp>

#include <gtest/gtest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace alvec;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("alvec_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string(ALVEC_BIN) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

QoSReport rep(std::uint64_t seed, double sla, double rt) {
  QoSReport r;
  r.seed = seed;
  r.sla_violation_rate = sla;
  r.avg_completion_ms = rt;
  return r;
}

}  // namespace

TEST(Presets, AllIdsBuildAndValidate) {
  for (const auto& id : preset_ids()) {
    const Preset p = make_preset(id);
    EXPECT_EQ(p.id, id);
    if (!p.trajectory) {
      EXPECT_NO_THROW(p.sim.validate());
      EXPECT_NO_THROW(p.scale.validate());
    }
  }
  EXPECT_THROW(make_preset("case4"), ConfigError);
}

TEST(Presets, JsonRoundTripAndHashStability) {
  for (const auto& id : preset_ids()) {
    const Preset p = make_preset(id);
    auto j = preset_to_json(p);
    j["preset"] = id;
    const Preset back = preset_from_json(j);
    EXPECT_EQ(preset_to_json(back).dump(), preset_to_json(p).dump()) << id;
    EXPECT_EQ(config_hash(back), config_hash(p));
  }
  EXPECT_NE(config_hash(make_preset("case1")), config_hash(make_preset("case2")));
}

TEST(Presets, UnknownOrBadKeysRejected) {
  EXPECT_THROW(preset_from_json({{"preset", "timeshared"}, {"warp_factor", 9}}), ConfigError);
  EXPECT_THROW(preset_from_json({{"preset", "timeshared"}, {"monitor_interval_ms", 0}}),
               ConfigError);
  const Preset p = preset_from_json({{"preset", "timeshared"}, {"initial_vms", 7}});
  EXPECT_EQ(p.sim.initial_vms, 7);
}

TEST(Compare, TalliesAndPairing) {
  const auto same = compare({{rep(1, 0.2, 300), rep(1, 0.2, 300)}});
  for (const auto& m : same.metrics) {
    EXPECT_EQ(m.ties, 1) << m.metric;
    EXPECT_EQ(m.mean_delta, 0.0);
  }
  const auto s = compare({{rep(1, 0.3, 300), rep(1, 0.1, 350)}});
  EXPECT_EQ(s.metrics[0].wins, 1);
  EXPECT_EQ(s.metrics[1].losses, 1);
  EXPECT_NEAR(s.metrics[0].mean_delta, -0.2, 1e-12);
  EXPECT_THROW(compare({{rep(1, 0, 0), rep(2, 0, 0)}}), PairingError);
}

TEST(Compare, SummaryWarnsOnLvAllocationFailures) {
  auto lv = rep(1, 0, 1);
  lv.allocation_failures = 2;
  std::ostringstream os;
  write_summary(os, compare({{rep(1, 0, 1), lv}}));
  EXPECT_NE(os.str().find("WARNING"), std::string::npos);
}

TEST(Report, UncontendedRunHasNoViolations) {
  Preset p = make_preset("timeshared");
  p.sim.batches = {{4, 4, 450, 0.0}};
  p.sim.arrival_window_ms = 0;
  const auto out = run_simulation(p, "none", 1);
  EXPECT_EQ(out.report.sla_violation_rate, 0.0);
  EXPECT_DOUBLE_EQ(out.report.avg_completion_ms, 400.0);
  ASSERT_EQ(out.report.phases.size(), 1u);
  EXPECT_DOUBLE_EQ(out.report.phases[0].makespan_ms, 400.0);
}

TEST(RunPreset, TrajectoryFiles) {
  const auto dir = scratch("traj");
  const auto r2 = run_preset(make_preset("case2"), {1}, dir);
  ASSERT_EQ(r2.files.size(), 1u);
  std::istringstream in(slurp(r2.files[0]));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("# alvec config_hash=", 0), 0u);
  std::getline(in, line);
  EXPECT_EQ(line, "t,P,Q");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_NE(line.find(",80,150"), std::string::npos) << line;
  }
  EXPECT_EQ(rows, 21);

  const auto r1 = run_preset(make_preset("case1"), {1}, dir);
  std::istringstream in1(slurp(r1.files[0]));
  for (int i = 0; i < 4; ++i) std::getline(in1, line);
  double t, p, q;
  char c;
  std::istringstream(line) >> t >> c >> p >> c >> q;
  EXPECT_NEAR(t, 0.1, 1e-12);
  EXPECT_NEAR(p, 73.82, 0.01);
  EXPECT_NEAR(q, 14.87, 0.06);
  fs::remove_all(dir);
}

TEST(RunPreset, ByteIdenticalAndBannered) {
  const auto a = scratch("det_a"), b = scratch("det_b");
  const Preset p = make_preset("proactive");
  const auto ra = run_preset(p, {1, 2}, a);
  run_preset(p, {1, 2}, b);
  ASSERT_EQ(ra.files.size(), 17u);
  for (const auto& f : ra.files) {
    const auto name = fs::path(f).filename();
    const auto body = slurp(f);
    EXPECT_EQ(body, slurp(b / name)) << name;
    if (name.extension() == ".json") {
      EXPECT_EQ(nlohmann::json::parse(body).at("config_hash"), config_hash(p));
    } else {
      EXPECT_EQ(body.rfind("# alvec config_hash=" + config_hash(p), 0), 0u) << name;
    }
  }
  const auto s = compare_directory(a);
  EXPECT_EQ(s.pairs, 2);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(CompareDirectory, MissingPartnerIsPairingError) {
  const auto dir = scratch("lonely");
  run_preset(make_preset("rr"), {1}, dir);
  fs::remove(dir / "rr_seed1_lv_report.json");
  EXPECT_THROW(compare_directory(dir), PairingError);
  EXPECT_THROW(compare_directory(dir / "nope"), ConfigError);
  fs::remove_all(dir);
}

TEST(Portrait, EquilibriumOrbitAndNullclines) {
  std::ostringstream os;
  const LVParams k{150, 1, 80, 1};
  EXPECT_TRUE(write_phase_portrait(os, k, {{80, 150, 0}}, 1.0, 0.5, {}, "b"));
  const auto s = os.str();
  EXPECT_NE(s.find("orbit,0,0.5,80,150"), std::string::npos);
  EXPECT_NE(s.find("p_nullcline,-1,nan,0,150"), std::string::npos);
  EXPECT_NE(s.find("q_nullcline,-1,nan,80,0"), std::string::npos);

  std::ostringstream bad;
  SolverConfig tight;
  tight.max_steps = 3;
  EXPECT_FALSE(write_phase_portrait(bad, {30, 1, 50, 1}, {{30, 50, 0}}, 2.0, 0.1, tight, "b"));
  EXPECT_NE(bad.str().find("warning,0"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("cli");
  const std::string out = " --out " + dir.string();
  EXPECT_EQ(cli("run case1" + out), 0);
  EXPECT_TRUE(fs::exists(dir / "case1_trajectory.csv"));
  EXPECT_EQ(cli("run nosuch" + out), 2);
  EXPECT_EQ(cli("run rr --seeds 3..1" + out), 2);
  EXPECT_EQ(cli("run rr --policy bogus" + out), 2);
  EXPECT_EQ(cli("frobnicate"), 2);
  EXPECT_EQ(cli("run rr --seeds 1,2" + out), 0);
  EXPECT_EQ(cli("compare " + dir.string()), 0);
  EXPECT_EQ(cli("compare " + (dir / "missing").string()), 2);
  EXPECT_EQ(cli("portrait --alpha 30 --beta 1 --gamma 50 --delta 1 --start 30,50 --start 50,30" +
                out),
            0);
  EXPECT_TRUE(fs::exists(dir / "portrait.csv"));
  EXPECT_EQ(cli("portrait --alpha 30 --beta 1 --gamma 50 --delta 1 --start 30" + out), 2);
  EXPECT_EQ(cli("portrait --alpha -1 --beta 1 --gamma 50 --delta 1 --start 1,1" + out), 2);

  std::ofstream(dir / "cfg.json") << R"({"preset": "rr", "initial_vms": 3})";
  EXPECT_EQ(cli("run --config " + (dir / "cfg.json").string() + " --seeds 1" + out), 0);
  std::ofstream(dir / "bad.json") << R"({"preset": "rr", "nonsense": 1})";
  EXPECT_EQ(cli("run --config " + (dir / "bad.json").string() + out), 2);
  fs::remove_all(dir);
}

TEST(Cli, OutputDirectoryFromEnvironment) {
  const auto dir = scratch("env");
  const std::string cmd =
      "ALVEC_OUT=" + dir.string() + " " + ALVEC_BIN + " run case3 >/dev/null 2>&1";
  EXPECT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(fs::exists(dir / "case3_trajectory.csv"));
  fs::remove_all(dir);
}
