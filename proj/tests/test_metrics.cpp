#include <alvec/metrics.hpp>

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace alvec;

namespace {

Cloudlet done(int id, double submit, double finish, double deadline = 1000.0) {
  Cloudlet c;
  c.id = id;
  c.submit_time = submit;
  c.start_time = submit;
  c.finish_time = finish;
  c.deadline = deadline;
  return c;
}

std::vector<Cloudlet> random_trace(std::mt19937_64& g, int n) {
  std::uniform_real_distribution<double> sub(0, 1000), dur(1, 2000);
  std::vector<Cloudlet> out;
  for (int i = 0; i < n; ++i) {
    const double s = sub(g);
    out.push_back(done(i, s, s + dur(g), 500));
  }
  return out;
}

}  // namespace

TEST(VmUtilization, LiteralRemainingWorkForm) {
  const VmSpec vm{100.0, 1, 124, 100};
  EXPECT_EQ(vm_utilization(vm, {}), 0.0);
  const std::vector<ResidentCloudlet> one{{1000, 1}};
  EXPECT_DOUBLE_EQ(vm_utilization(vm, one), 10.0);
  const std::vector<ResidentCloudlet> two{{1000, 1}, {1000, 1}};
  EXPECT_DOUBLE_EQ(vm_utilization(vm, two), 20.0);
  const VmSpec dual{100.0, 2, 124, 100};
  const std::vector<ResidentCloudlet> wide{{1000, 2}};
  EXPECT_DOUBLE_EQ(vm_utilization(dual, wide), 10.0);
}

TEST(AvgUtilization, MeanOfNormalizedLoads) {
  const std::vector<VmLoad> loads{{100, 100}, {100, 0}};
  EXPECT_DOUBLE_EQ(*avg_utilization(loads), 0.5);
  const std::vector<VmLoad> over{{100, 250}};
  EXPECT_DOUBLE_EQ(*avg_utilization(over), 1.0);
  EXPECT_FALSE(avg_utilization({}).has_value());
}

TEST(PhaseMetrics, AverageCompletionAndMakespan) {
  const std::vector<Cloudlet> ph{done(0, 0, 400), done(1, 100, 600)};
  EXPECT_DOUBLE_EQ(avg_completion(ph), 450.0);
  EXPECT_DOUBLE_EQ(makespan(ph), 600.0);
  const std::vector<Cloudlet> pair{done(0, 0, 300), done(1, 0, 500)};
  EXPECT_DOUBLE_EQ(avg_completion(pair), 400.0);
}

TEST(PhaseMetrics, IncompleteOrEmptyPhaseRaises) {
  std::vector<Cloudlet> ph{done(0, 0, 400)};
  ph.push_back(Cloudlet{});
  EXPECT_THROW(avg_completion(ph), PartialPhase);
  EXPECT_THROW(makespan(ph), PartialPhase);
  EXPECT_THROW(avg_completion(std::vector<Cloudlet>{}), PartialPhase);
}

TEST(SlaRate, CountsLateAndUnfinished) {
  std::vector<Cloudlet> ph{done(0, 0, 100, 200), done(1, 0, 200, 200), done(2, 0, 300, 200)};
  ph.push_back(Cloudlet{});
  ph.back().deadline = 200;
  EXPECT_DOUBLE_EQ(sla_rate(ph), 0.5);
  std::vector<Cloudlet> tight{done(0, 0, 10, 0), done(1, 5, 6, 0)};
  EXPECT_DOUBLE_EQ(sla_rate(tight), 1.0);
  EXPECT_EQ(sla_rate(std::vector<Cloudlet>{}), 0.0);
}

TEST(SlaRate, ExactDeadlineIsNotLateDespiteRounding) {
  // 0.1 + 400 - 0.1 is not exactly 400 in binary
  std::vector<Cloudlet> ph{done(0, 0.1, 0.1 + 400.0, 400.0 - 1e-13)};
  EXPECT_EQ(sla_rate(ph), 0.0);
}

TEST(MetricProperties, RandomTraces) {
  std::mt19937_64 g(3);
  for (int rep = 0; rep < 200; ++rep) {
    auto tr = random_trace(g, 1 + rep % 20);
    EXPECT_GE(makespan(tr), avg_completion(tr) - 1e-9);
    const double r = sla_rate(tr);
    EXPECT_GE(r, 0.0);
    EXPECT_LE(r, 1.0);
    // loosening every deadline never raises the rate
    auto loose = tr;
    for (auto& c : loose) c.deadline += 250;
    EXPECT_LE(sla_rate(loose), r);
    // relabelling does not matter
    auto shuffled = tr;
    std::shuffle(shuffled.begin(), shuffled.end(), g);
    for (std::size_t i = 0; i < shuffled.size(); ++i) shuffled[i].id = static_cast<int>(100 - i);
    EXPECT_NEAR(avg_completion(shuffled), avg_completion(tr), 1e-9);
    EXPECT_EQ(makespan(shuffled), makespan(tr));
    EXPECT_EQ(sla_rate(shuffled), r);
  }
}

TEST(QoSReport, JsonRoundTripKeepsNaNAsNull) {
  QoSReport r;
  r.policy = "reactive_lv";
  r.seed = 4;
  r.avg_completion_ms = 123.5;
  r.sla_violation_rate = 0.25;
  r.avg_ram_util = kNaN;
  r.allocation_failures = 2;
  PhaseReport p;
  p.phase = 1;
  p.label = "batch1";
  p.vm_count = 3;
  p.cloudlet_count = 10;
  p.avg_completion_ms = kNaN;
  r.phases.push_back(p);
  const nlohmann::json j = r;
  EXPECT_TRUE(j.at("avg_ram_util").is_null());
  const auto back = j.get<QoSReport>();
  EXPECT_EQ(back.policy, "reactive_lv");
  EXPECT_EQ(back.seed, 4u);
  EXPECT_EQ(back.avg_completion_ms, 123.5);
  EXPECT_TRUE(std::isnan(back.avg_ram_util));
  ASSERT_EQ(back.phases.size(), 1u);
  EXPECT_EQ(back.phases[0].label, "batch1");
  EXPECT_TRUE(std::isnan(back.phases[0].avg_completion_ms));
  EXPECT_EQ(nlohmann::json(back).dump(), j.dump());
}

TEST(QoSTable, HasTableColumns) {
  QoSReport r;
  PhaseReport p;
  p.phase = 1;
  r.phases.push_back(p);
  std::ostringstream os;
  write_qos_table(os, r);
  const auto s = os.str();
  for (const char* col : {"Phase", "VM", "cloudlets", "Avg Req Compln time", "SLA violation",
                          "MakeSpan"}) {
    EXPECT_NE(s.find(col), std::string::npos) << col;
  }
}
