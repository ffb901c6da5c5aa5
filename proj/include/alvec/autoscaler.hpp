#pragma once

// LV-driven elasticity: parameter tuning, scale-target selection from a
// trajectory, threshold and forecast controllers, and the admission gate.

#include <alvec/error.hpp>
#include <alvec/lv_core.hpp>
#include <alvec/ode_solver.hpp>
#include <alvec/predictor.hpp>
#include <alvec/sim_engine.hpp>
#include <alvec/sim_types.hpp>

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>

namespace alvec {

enum class Direction { Up, Down };

struct ScalePolicyConfig {
  double max_threshold{0.80};
  double min_threshold{0.20};
  double monitor_interval_ms{100.0};
  double upper_rt_ms{400.0};
  double lower_rt_ms{100.0};
  std::size_t wma_n{3};
  double epsilon{0.5};
  double lv_horizon{2.0};
  double lv_step{0.1};
  SolverConfig solver;

  void validate() const {
    if (!(0.0 < min_threshold && min_threshold < max_threshold && max_threshold < 1.0)) {
      throw ConfigError("thresholds must satisfy 0 < min < max < 1");
    }
    if (!(upper_rt_ms > lower_rt_ms && lower_rt_ms > 0.0)) {
      throw ConfigError("response-time band must satisfy upper > lower > 0");
    }
    if (!(monitor_interval_ms > 0.0)) throw ConfigError("monitor interval must be positive");
    if (wma_n < 1) throw ConfigError("wma_n must be at least 1");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (!(lv_step > 0.0) || !(lv_horizon >= lv_step)) {
      throw ConfigError("LV horizon must be at least one step");
    }
    solver.validate();
  }
};

// Coefficients that put the state into the requested regime. beta = delta = 1.
inline LVParams tune_parameters(const PopulationState& s, Scenario goal, double epsilon) {
  if (!(s.p > 0.0) || !(s.q > 0.0) || !std::isfinite(s.p) || !std::isfinite(s.q)) {
    throw DomainError("cannot tune parameters for non-positive populations");
  }
  if (!(epsilon > 0.0)) throw InvalidParams("epsilon must be positive");
  const double p = s.p, q = s.q;
  LVParams k{q, 1.0, p, 1.0};

  switch (goal) {
    case Scenario::Stable:
      break;
    case Scenario::PreyIncreasing: {
      if (p < q) {
        k.alpha = p;
        k.gamma = q;
      } else {
        k.alpha = q / 2.0;
      }
      while (!(k.gamma * q > k.alpha * p && k.gamma > p)) k.gamma += epsilon;
      break;
    }
    case Scenario::PreyDecreasing: {
      k.alpha = 1.5 * q;
      k.gamma = p / 2.0;
      while (!(k.alpha * p > k.gamma * q && k.alpha > q)) k.alpha += epsilon;
      break;
    }
  }
  return k;
}

struct ScaleTarget {
  int vms{0};
  double sample_time{kNaN};
};

// Earliest sample whose truncated P lands in the direction window.
inline std::optional<ScaleTarget> select_scale_target(const Trajectory& traj, int current,
                                                      Direction dir, int pool_remaining) {
  for (const auto& s : traj.samples) {
    const double t = std::trunc(s.p);
    if (!std::isfinite(t)) continue;
    const bool ok = dir == Direction::Up
                        ? (t > current && t <= static_cast<double>(current) + pool_remaining)
                        : (t > 0.0 && t < current);
    if (ok) return ScaleTarget{static_cast<int>(t), s.t};
  }
  return std::nullopt;
}

inline ScaleDecision lv_scale_target(int current_vms, int current_cloudlets, Direction dir,
                                     int pool_remaining, const ScalePolicyConfig& cfg = {},
                                     std::optional<Trigger> trigger = std::nullopt) {
  if (current_vms < 1 || current_cloudlets < 1) {
    throw InvalidParams("lv_scale_target needs at least one VM and one cloudlet");
  }
  if (pool_remaining < 0) throw InvalidParams("pool_remaining must be non-negative");

  ScaleDecision d;
  d.current_vms = current_vms;
  d.target_vms = current_vms;
  d.applied_vms = current_vms;

  const PopulationState start{static_cast<double>(current_vms),
                              static_cast<double>(current_cloudlets), 0.0};
  const Scenario goal = dir == Direction::Up ? Scenario::PreyIncreasing : Scenario::PreyDecreasing;
  const LVParams k = tune_parameters(start, goal, cfg.epsilon);
  const Trajectory traj = integrate(start, k, cfg.lv_horizon, cfg.lv_step, cfg.solver);
  const auto pick = select_scale_target(traj, current_vms, dir, pool_remaining);
  if (!pick) return d;

  d.trigger = trigger.value_or(dir == Direction::Up ? Trigger::UtilHigh : Trigger::UtilLow);
  d.target_vms = pick->vms;
  d.lv_sample_time = pick->sample_time;
  return d;
}

struct ClusterSnapshot {
  double time{0.0};
  int online_vms{0};
  int cloudlets{0};  // active plus queued
  int pool_remaining{0};
  double avg_util{0.0};
};

enum class ScaleMode { FixedStep, Lv };

using LvPlanFn = std::function<ScaleDecision(int, int, Direction, int, Trigger)>;

namespace detail {

inline ScaleDecision none_decision(const ClusterSnapshot& s) {
  ScaleDecision d;
  d.time = s.time;
  d.current_vms = s.online_vms;
  d.target_vms = s.online_vms;
  d.applied_vms = s.online_vms;
  return d;
}

inline ScaleDecision scale(const ClusterSnapshot& s, Direction dir, Trigger trig, ScaleMode mode,
                           const ScalePolicyConfig& cfg, const LvPlanFn& plan) {
  ScaleDecision d = none_decision(s);
  if (s.online_vms < 1) return d;
  if (mode == ScaleMode::FixedStep) {
    if (dir == Direction::Up && s.pool_remaining < 1) return d;
    if (dir == Direction::Down && s.online_vms < 2) return d;
    d.trigger = trig;
    d.target_vms = s.online_vms + (dir == Direction::Up ? 1 : -1);
    return d;
  }
  if (dir == Direction::Up && s.pool_remaining < 1) return d;
  const int cl = std::max(1, s.cloudlets);
  ScaleDecision lv = plan ? plan(s.online_vms, cl, dir, s.pool_remaining, trig)
                          : lv_scale_target(s.online_vms, cl, dir, s.pool_remaining, cfg, trig);
  lv.time = s.time;
  return lv;
}

}  // namespace detail

inline ScaleDecision reactive_tick(const ClusterSnapshot& s, const ScalePolicyConfig& cfg,
                                   ScaleMode mode = ScaleMode::Lv, const LvPlanFn& plan = {}) {
  if (s.avg_util > cfg.max_threshold) {
    return detail::scale(s, Direction::Up, Trigger::UtilHigh, mode, cfg, plan);
  }
  if (s.avg_util < cfg.min_threshold) {
    return detail::scale(s, Direction::Down, Trigger::UtilLow, mode, cfg, plan);
  }
  return detail::none_decision(s);
}

inline ScaleDecision proactive_tick(const WmaWindow& history, const ClusterSnapshot& s,
                                    const ScalePolicyConfig& cfg, ScaleMode mode = ScaleMode::Lv,
                                    const LvPlanFn& plan = {}) {
  const auto predicted = wma_predict(history);
  if (!predicted) return detail::none_decision(s);
  if (*predicted > cfg.upper_rt_ms) {
    return detail::scale(s, Direction::Up, Trigger::RtHigh, mode, cfg, plan);
  }
  if (*predicted < cfg.lower_rt_ms) {
    return detail::scale(s, Direction::Down, Trigger::RtLow, mode, cfg, plan);
  }
  return detail::none_decision(s);
}

enum class GateAction { Admit, Queue };

// occupancy: fraction of online VMs executing at least one cloudlet.
inline GateAction lv_timeshared_gate(double occupancy, bool queue_nonempty,
                                     const ScalePolicyConfig& cfg) {
  if (occupancy < cfg.min_threshold && queue_nonempty) return GateAction::Admit;
  return occupancy > cfg.max_threshold ? GateAction::Queue : GateAction::Admit;
}

// Memoized lv_scale_target; controllers ask the same question many times.
class LvPlanner {
 public:
  explicit LvPlanner(ScalePolicyConfig cfg) : cfg_(std::move(cfg)) {}

  ScaleDecision operator()(int vms, int cloudlets, Direction dir, int pool, Trigger trig) {
    const auto key = std::make_tuple(vms, cloudlets, dir == Direction::Up, pool);
    auto it = memo_.find(key);
    if (it == memo_.end()) {
      ScaleDecision d;
      try {
        d = lv_scale_target(vms, cloudlets, dir, pool, cfg_, trig);
      } catch (const NonConvergence&) {
        d = lv_none(vms);
      } catch (const Divergence&) {
        d = lv_none(vms);
      } catch (const StepSizeUnderflow&) {
        d = lv_none(vms);
      }
      it = memo_.emplace(key, d).first;
    }
    ScaleDecision d = it->second;
    if (!d.is_none()) d.trigger = trig;
    return d;
  }

  LvPlanFn fn() {
    return [this](int v, int c, Direction dir, int p, Trigger t) { return (*this)(v, c, dir, p, t); };
  }

 private:
  static ScaleDecision lv_none(int vms) {
    ScaleDecision d;
    d.current_vms = d.target_vms = d.applied_vms = vms;
    return d;
  }

  ScalePolicyConfig cfg_;
  std::map<std::tuple<int, int, bool, int>, ScaleDecision> memo_;
};

namespace detail {

inline ClusterSnapshot snapshot(const Simulation& sim) {
  return {sim.now(), sim.online_vms(), sim.active_cloudlets() + sim.queued_cloudlets(),
          sim.pool_remaining(), sim.avg_utilization()};
}

// Carries out a decision; Down releases idle VMs only.
inline void apply(Simulation& sim, ScaleDecision& d, bool pool_only = false) {
  if (d.is_none()) return;
  const int current = sim.online_vms();
  if (d.target_vms > current) {
    d.applied_vms = current + sim.acquire_vms(d.target_vms - current);
    d.shortfall = d.target_vms - d.applied_vms;
  } else if (d.target_vms < current) {
    d.applied_vms = current - sim.release_idle_vms(current - d.target_vms, pool_only);
    d.shortfall = d.applied_vms - d.target_vms;
  }
  sim.record_decision(d);
}

}  // namespace detail

class ReactiveScaler : public ScalingPolicy {
 public:
  ReactiveScaler(ScalePolicyConfig cfg, ScaleMode mode)
      : cfg_(std::move(cfg)), mode_(mode), planner_(cfg_) {
    cfg_.validate();
  }
  [[nodiscard]] std::string name() const override {
    return mode_ == ScaleMode::Lv ? "reactive_lv" : "reactive";
  }
  void on_tick(Simulation& sim) override {
    ScaleDecision d = reactive_tick(detail::snapshot(sim), cfg_, mode_, planner_.fn());
    detail::apply(sim, d);
  }

 private:
  ScalePolicyConfig cfg_;
  ScaleMode mode_;
  LvPlanner planner_;
};

// Feeds the mean response time of cloudlets finished during each monitor
// interval into the WMA window.
class ProactiveScaler : public ScalingPolicy {
 public:
  ProactiveScaler(ScalePolicyConfig cfg, ScaleMode mode)
      : cfg_(std::move(cfg)), mode_(mode), planner_(cfg_), window_(cfg_.wma_n) {
    cfg_.validate();
  }
  [[nodiscard]] std::string name() const override {
    return mode_ == ScaleMode::Lv ? "proactive_lv" : "proactive";
  }
  void on_complete(Simulation&, const Cloudlet& c) override {
    rt_sum_ += c.completion_time();
    ++rt_count_;
  }
  void on_tick(Simulation& sim) override {
    if (rt_count_ > 0) {
      window_.push(rt_sum_ / rt_count_);
      rt_sum_ = 0.0;
      rt_count_ = 0;
    }
    ScaleDecision d = proactive_tick(window_, detail::snapshot(sim), cfg_, mode_, planner_.fn());
    detail::apply(sim, d);
  }

 private:
  ScalePolicyConfig cfg_;
  ScaleMode mode_;
  LvPlanner planner_;
  WmaWindow window_;
  double rt_sum_{0.0};
  int rt_count_{0};
};

// Admission gate in front of the dispatcher. While occupancy is above the
// upper threshold, cloudlets wait and pool VMs are added up to the LV target;
// the queue drains once those VMs are serviceable. Idle pool VMs are returned
// when occupancy falls below the lower threshold.
class TimesharedGate : public ScalingPolicy {
 public:
  explicit TimesharedGate(ScalePolicyConfig cfg) : cfg_(std::move(cfg)), planner_(cfg_) {
    cfg_.validate();
  }
  [[nodiscard]] std::string name() const override { return "timeshared_lv"; }

  bool admit(Simulation& sim) override {
    const int serviceable = sim.serviceable_vms();
    if (serviceable == 0) return true;
    const double occ = static_cast<double>(sim.busy_vms()) / serviceable;
    if (lv_timeshared_gate(occ, sim.queued_cloudlets() > 0, cfg_) == GateAction::Admit) {
      if (occ < cfg_.min_threshold) holding_ = false;
      return !holding_ || release_hold(sim);
    }
    if (holding_) return release_hold(sim);
    if (sim.pool_remaining() < 1) return true;

    ClusterSnapshot s = detail::snapshot(sim);
    ScaleDecision d = planner_(s.online_vms, std::max(1, s.cloudlets), Direction::Up,
                               s.pool_remaining, Trigger::UtilHigh);
    if (d.is_none()) return true;
    d.time = sim.now();
    detail::apply(sim, d);
    hold_target_ = d.applied_vms;
    holding_ = true;
    return release_hold(sim);
  }

  void on_tick(Simulation& sim) override {
    const int serviceable = sim.serviceable_vms();
    if (serviceable == 0 || sim.queued_cloudlets() > 0) return;
    const double occ = static_cast<double>(sim.busy_vms()) / serviceable;
    if (occ >= cfg_.min_threshold) return;
    ClusterSnapshot s = detail::snapshot(sim);
    if (s.online_vms < 2) return;
    ScaleDecision d = planner_(s.online_vms, std::max(1, s.cloudlets), Direction::Down,
                               s.pool_remaining, Trigger::UtilLow);
    d.time = sim.now();
    detail::apply(sim, d, true);
  }

 private:
  bool release_hold(Simulation& sim) {
    if (sim.serviceable_vms() >= std::min(hold_target_, sim.online_vms())) holding_ = false;
    return !holding_;
  }

  ScalePolicyConfig cfg_;
  LvPlanner planner_;
  bool holding_{false};
  int hold_target_{0};
};

inline std::unique_ptr<ScalingPolicy> make_scaling_policy(const std::string& name,
                                                          const ScalePolicyConfig& cfg) {
  if (name == "none" || name == "timeshared") return std::make_unique<ScalingPolicy>();
  if (name == "reactive") return std::make_unique<ReactiveScaler>(cfg, ScaleMode::FixedStep);
  if (name == "reactive_lv") return std::make_unique<ReactiveScaler>(cfg, ScaleMode::Lv);
  if (name == "proactive") return std::make_unique<ProactiveScaler>(cfg, ScaleMode::FixedStep);
  if (name == "proactive_lv") return std::make_unique<ProactiveScaler>(cfg, ScaleMode::Lv);
  if (name == "timeshared_lv") return std::make_unique<TimesharedGate>(cfg);
  throw ConfigError("unknown scaling policy: " + name);
}

}  // namespace alvec
