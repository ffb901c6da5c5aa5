#include <alvec/autoscaler.hpp>
#include <alvec/experiment.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace alvec;

namespace {

ClusterSnapshot snap(int vms, int cloudlets, int pool, double util) {
  return {0.0, vms, cloudlets, pool, util};
}

Trajectory flat(double p, int n) {
  Trajectory t;
  for (int i = 0; i < n; ++i) t.samples.push_back({p, 10.0, 0.1 * i});
  return t;
}

}  // namespace

TEST(TuneParameters, HitsRequestedScenario) {
  std::mt19937_64 g(2);
  std::uniform_real_distribution<double> u(1.0, 300.0);
  for (int i = 0; i < 500; ++i) {
    const PopulationState s{std::round(u(g)), std::round(u(g)), 0};
    EXPECT_EQ(scenario_condition(s, tune_parameters(s, Scenario::Stable, 0.5)), Scenario::Stable);
    EXPECT_EQ(scenario_condition(s, tune_parameters(s, Scenario::PreyIncreasing, 0.5)),
              Scenario::PreyIncreasing);
    EXPECT_EQ(scenario_condition(s, tune_parameters(s, Scenario::PreyDecreasing, 0.5)),
              Scenario::PreyDecreasing);
  }
}

TEST(TuneParameters, RejectsBadInput) {
  EXPECT_THROW(tune_parameters({0, 5, 0}, Scenario::Stable, 0.5), DomainError);
  EXPECT_THROW(tune_parameters({5, 5, 0}, Scenario::Stable, 0.0), InvalidParams);
}

TEST(LvScaleTarget, UpFromThirtyFifty) {
  const auto d = lv_scale_target(30, 50, Direction::Up, 100);
  EXPECT_EQ(d.target_vms, 73);
  EXPECT_NEAR(d.lv_sample_time, 0.1, 1e-12);
  EXPECT_EQ(d.trigger, Trigger::UtilHigh);
}

TEST(LvScaleTarget, DownFromSixtyEighty) {
  const auto d = lv_scale_target(60, 80, Direction::Down, 0);
  EXPECT_EQ(d.target_vms, 34);
  EXPECT_NEAR(d.lv_sample_time, 0.1, 1e-12);
  EXPECT_EQ(d.trigger, Trigger::UtilLow);
}

TEST(LvScaleTarget, SmallPoolPicksLaterSample) {
  const auto d = lv_scale_target(30, 50, Direction::Up, 6);
  EXPECT_EQ(d.target_vms, 36);
  EXPECT_NEAR(d.lv_sample_time, 0.4, 1e-12);
}

TEST(LvScaleTarget, WindowInvariantsOverGrid) {
  for (int v = 1; v <= 60; v += 3) {
    for (int c = 1; c <= 120; c += 7) {
      for (int pool : {0, 1, 5, 40}) {
        const auto up = lv_scale_target(v, c, Direction::Up, pool);
        if (!up.is_none()) {
          EXPECT_GT(up.target_vms, v);
          EXPECT_LE(up.target_vms, v + pool);
        } else {
          EXPECT_EQ(up.target_vms, v);
        }
        const auto dn = lv_scale_target(v, c, Direction::Down, pool);
        if (!dn.is_none()) {
          EXPECT_GE(dn.target_vms, 1);
          EXPECT_LT(dn.target_vms, v);
        }
      }
    }
  }
}

TEST(LvScaleTarget, RejectsEmptyCluster) {
  EXPECT_THROW(lv_scale_target(0, 5, Direction::Up, 3), InvalidParams);
  EXPECT_THROW(lv_scale_target(5, 0, Direction::Up, 3), InvalidParams);
}

TEST(SelectScaleTarget, FlatTrajectoryGivesNothing) {
  EXPECT_FALSE(select_scale_target(flat(30, 21), 30, Direction::Up, 10));
  EXPECT_FALSE(select_scale_target(flat(30, 21), 30, Direction::Down, 10));
  // stable-tuned coefficients hold the start point fixed
  const PopulationState s{12, 40, 0};
  const auto tr = integrate(s, tune_parameters(s, Scenario::Stable, 0.5), 2.0, 0.1);
  EXPECT_FALSE(select_scale_target(tr, 12, Direction::Up, 50));
  EXPECT_FALSE(select_scale_target(tr, 12, Direction::Down, 50));
}

TEST(SelectScaleTarget, TruncatesAndTakesEarliest) {
  Trajectory t;
  t.samples = {{30, 1, 0}, {33.9, 1, 0.1}, {35.2, 1, 0.2}, {31.5, 1, 0.3}};
  const auto up = select_scale_target(t, 30, Direction::Up, 10);
  ASSERT_TRUE(up);
  EXPECT_EQ(up->vms, 33);
  EXPECT_EQ(up->sample_time, 0.1);
  const auto tight = select_scale_target(t, 30, Direction::Up, 2);
  EXPECT_EQ(tight->vms, 31);
  EXPECT_FALSE(select_scale_target(t, 30, Direction::Up, 0));
}

TEST(ReactiveTick, ThresholdBand) {
  const ScalePolicyConfig cfg;
  EXPECT_TRUE(reactive_tick(snap(10, 20, 5, 0.5), cfg).is_none());
  EXPECT_TRUE(reactive_tick(snap(10, 20, 5, 0.8), cfg).is_none());
  const auto up = reactive_tick(snap(10, 20, 5, 0.9), cfg);
  EXPECT_EQ(up.trigger, Trigger::UtilHigh);
  EXPECT_GT(up.target_vms, 10);
  EXPECT_LE(up.target_vms, 15);
  EXPECT_TRUE(reactive_tick(snap(10, 20, 0, 0.9), cfg).is_none());
  const auto fixed = reactive_tick(snap(10, 20, 5, 0.9), cfg, ScaleMode::FixedStep);
  EXPECT_EQ(fixed.target_vms, 11);
  const auto down = reactive_tick(snap(10, 20, 5, 0.1), cfg, ScaleMode::FixedStep);
  EXPECT_EQ(down.target_vms, 9);
  EXPECT_EQ(down.trigger, Trigger::UtilLow);
  EXPECT_TRUE(reactive_tick(snap(1, 1, 5, 0.1), cfg, ScaleMode::FixedStep).is_none());
}

TEST(ProactiveTick, ResponseTimeBand) {
  const ScalePolicyConfig cfg;
  const auto s = snap(10, 30, 5, 0.5);
  EXPECT_TRUE(proactive_tick(WmaWindow(3, {200, 200}), s, cfg).is_none());
  EXPECT_TRUE(proactive_tick(WmaWindow(3, {200, 200, 200}), s, cfg).is_none());
  const auto up = proactive_tick(WmaWindow(3, {450, 450, 450}), s, cfg);
  EXPECT_EQ(up.trigger, Trigger::RtHigh);
  EXPECT_GT(up.target_vms, 10);
  const auto base = proactive_tick(WmaWindow(3, {450, 450, 450}), s, cfg, ScaleMode::FixedStep);
  EXPECT_EQ(base.target_vms, 11);
  const auto down = proactive_tick(WmaWindow(3, {50, 50, 50}), s, cfg, ScaleMode::FixedStep);
  EXPECT_EQ(down.trigger, Trigger::RtLow);
  EXPECT_EQ(down.target_vms, 9);
}

TEST(Gate, Thresholds) {
  const ScalePolicyConfig cfg;
  EXPECT_EQ(lv_timeshared_gate(0.5, true, cfg), GateAction::Admit);
  EXPECT_EQ(lv_timeshared_gate(0.9, true, cfg), GateAction::Queue);
  EXPECT_EQ(lv_timeshared_gate(0.1, true, cfg), GateAction::Admit);
}

TEST(Planner, MemoMatchesDirectCall) {
  LvPlanner p{ScalePolicyConfig{}};
  const auto a = p(30, 50, Direction::Up, 100, Trigger::RtHigh);
  const auto b = p(30, 50, Direction::Up, 100, Trigger::UtilHigh);
  EXPECT_EQ(a.target_vms, 73);
  EXPECT_EQ(a.trigger, Trigger::RtHigh);
  EXPECT_EQ(b.trigger, Trigger::UtilHigh);
}

TEST(ScalePolicyConfig, Validation) {
  ScalePolicyConfig c;
  EXPECT_NO_THROW(c.validate());
  c.min_threshold = 0.9;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.lower_rt_ms = 500;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_THROW(make_scaling_policy("bogus", {}), ConfigError);
}

// Scaled runs: decisions respect windows and never release a busy VM.
TEST(Controllers, EngineLevelAudit) {
  for (const char* id : {"reactive", "proactive", "timeshared"}) {
    const Preset p = make_preset(id);
    for (const auto& role : {p.baseline, p.lv}) {
      SCOPED_TRACE(std::string(id) + "/" + role);
      const auto out = run_simulation(p, role, 2);
      const auto& t = out.trace;
      for (const auto& d : t.decisions) {
        EXPECT_NE(d.target_vms, d.current_vms);
        EXPECT_GE(d.applied_vms, 1);
        EXPECT_GE(d.shortfall, 0);
      }
      for (const auto& c : t.cloudlets) {
        if (c.vm_id < 0) continue;
        const auto& vm = t.vms[c.vm_id];
        if (!std::isnan(vm.released_at) && c.completed()) {
          EXPECT_GE(vm.released_at, c.finish_time);
        }
        EXPECT_GE(c.start_time, vm.serviceable_at);
      }
    }
  }
}

TEST(Controllers, GateKeepsFcfsOrder) {
  Preset p = make_preset("timeshared");
  p.sim.vm_boot_delay_ms = 30;
  const auto t = run_simulation(p, p.lv, 3).trace;
  for (std::size_t i = 1; i < t.dispatches.size(); ++i) {
    const auto& a = t.cloudlets[t.dispatches[i - 1].cloudlet_id];
    const auto& b = t.cloudlets[t.dispatches[i].cloudlet_id];
    EXPECT_TRUE(a.submit_time < b.submit_time || (a.submit_time == b.submit_time && a.id < b.id));
  }
}
