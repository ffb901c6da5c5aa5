#pragma once

// Experiment harness behind the alvec tool: presets, flat JSON configs,
// seeded runs, report files and baseline-vs-LV comparison.

#include <alvec/autoscaler.hpp>
#include <alvec/error.hpp>
#include <alvec/lv_core.hpp>
#include <alvec/metrics.hpp>
#include <alvec/ode_solver.hpp>
#include <alvec/schedulers.hpp>
#include <alvec/sim_engine.hpp>

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace alvec {

struct Preset {
  std::string id;
  bool trajectory{false};

  // trajectory presets
  LVParams params;
  PopulationState start;
  double t_end{2.0};
  double sample_step{0.1};

  // simulation presets
  SimConfig sim;
  ScalePolicyConfig scale;
  std::string dispatch{"timeshared"};
  std::string baseline{"timeshared"};  // scaling policy of the baseline side
  std::string lv{"timeshared_lv"};     // scaling policy of the LV side
};

inline const std::vector<std::string>& preset_ids() {
  static const std::vector<std::string> ids{"case1",      "case2", "case3", "reactive",
                                            "proactive",  "timeshared", "sjf", "ljf",
                                            "olb",        "rr",    "minmin"};
  return ids;
}

namespace detail {

inline Preset trajectory_preset(std::string id, LVParams k, double p, double q) {
  Preset s;
  s.id = std::move(id);
  s.trajectory = true;
  s.params = k;
  s.start = {p, q, 0.0};
  return s;
}

inline std::vector<BatchSpec> batches(std::initializer_list<std::array<double, 3>> rows) {
  std::vector<BatchSpec> out;
  for (const auto& r : rows) {
    out.push_back({static_cast<int>(r[0]), static_cast<int>(r[1]), r[2]});
  }
  return out;
}

}  // namespace detail

inline Preset make_preset(const std::string& id) {
  if (id == "case1") return detail::trajectory_preset(id, {30.0, 1.0, 50.0, 1.0}, 30.0, 50.0);
  if (id == "case2") return detail::trajectory_preset(id, {150.0, 1.0, 80.0, 1.0}, 80.0, 150.0);
  if (id == "case3") return detail::trajectory_preset(id, {120.0, 1.0, 30.0, 1.0}, 60.0, 80.0);

  Preset s;
  s.id = id;
  s.sim.vm_pool_size = 100;
  if (id == "reactive") {
    s.sim.batches = detail::batches({{10, 98, 400}, {15, 135, 400}, {16, 155, 400}});
    s.sim.initial_vms = 10;
    s.sim.vm_pool_size = 40;
    s.sim.background = {8, 100.0, 3000.0, 400.0};
    s.baseline = "reactive";
    s.lv = "reactive_lv";
  } else if (id == "proactive") {
    s.sim.batches = detail::batches({{27, 98, 2000}, {27, 302, 2000}, {27, 150, 2000}});
    s.sim.initial_vms = 27;
    s.sim.background = {10, 375.0, 3000.0, 2000.0};  // 80 extra cloudlets
    s.baseline = "proactive";
    s.lv = "proactive_lv";
  } else if (id == "timeshared") {
    s.sim.batches = detail::batches({{60, 80, 450}, {55, 180, 1000}, {9, 87, 1000}});
  } else if (id == "sjf" || id == "ljf" || id == "olb" || id == "rr") {
    s.sim.batches = detail::batches({{60, 80, 450}, {5, 35, 1000}, {9, 15, 1000}});
    s.sim.cloudlet_length = 20000.0;
    s.sim.cloudlet_length_max = 60000.0;
    s.dispatch = id;
    s.baseline = "none";
  } else if (id == "minmin") {
    s.sim.batches = detail::batches({{60, 120, 450}});
    s.sim.vm_mips_spread = 0.5;
    s.dispatch = "minmin";
    s.baseline = "none";
  } else {
    throw ConfigError("unknown preset: " + id);
  }
  return s;
}

// Flat JSON mirroring the config field names.
inline nlohmann::json preset_to_json(const Preset& p) {
  using nlohmann::json;
  json j;
  j["preset"] = p.id;
  j["kind"] = p.trajectory ? "trajectory" : "simulation";
  if (p.trajectory) {
    j["alpha"] = p.params.alpha;
    j["beta"] = p.params.beta;
    j["gamma"] = p.params.gamma;
    j["delta"] = p.params.delta;
    j["start_p"] = p.start.p;
    j["start_q"] = p.start.q;
    j["t_end"] = p.t_end;
    j["sample_step"] = p.sample_step;
    j["rel_tol"] = p.scale.solver.rel_tol;
    j["abs_tol"] = p.scale.solver.abs_tol;
    return j;
  }
  const SimConfig& c = p.sim;
  json hosts = json::array();
  for (const auto& h : c.hosts) {
    hosts.push_back({{"pes", h.pes}, {"mips_per_pe", h.mips_per_pe}, {"ram_mb", h.ram_mb},
                     {"bw_kbps", h.bw_kbps}, {"storage_gb", h.storage_gb}});
  }
  json batches = json::array();
  for (const auto& b : c.batches) {
    json row{{"vm_count", b.vm_count}, {"cloudlet_count", b.cloudlet_count},
             {"deadline_ms", b.deadline_ms}};
    if (!std::isnan(b.start_ms)) row["start_ms"] = b.start_ms;
    batches.push_back(row);
  }
  j["hosts"] = hosts;
  j["vm_mips"] = c.vm_template.mips;
  j["vm_pes"] = c.vm_template.pes;
  j["vm_ram_mb"] = c.vm_template.ram_mb;
  j["vm_bw"] = c.vm_template.bw;
  j["initial_vms"] = c.initial_vms;
  j["vm_pool_size"] = c.vm_pool_size;
  j["batches"] = batches;
  j["arrival_window_ms"] = c.arrival_window_ms;
  j["monitor_interval_ms"] = c.monitor_interval_ms;
  j["background_count"] = c.background.count_per_interval;
  j["background_interval_ms"] = c.background.interval_ms;
  j["background_until_ms"] = c.background.until_ms;
  j["background_deadline_ms"] = c.background.deadline_ms;
  j["vm_boot_delay_ms"] = c.vm_boot_delay_ms;
  j["sim_horizon_ms"] = c.sim_horizon_ms;
  j["cloudlet_length"] = c.cloudlet_length;
  j["cloudlet_length_max"] = c.cloudlet_length_max;
  j["cloudlet_pes"] = c.cloudlet_pes;
  j["vm_mips_spread"] = c.vm_mips_spread;
  j["max_threshold"] = p.scale.max_threshold;
  j["min_threshold"] = p.scale.min_threshold;
  j["upper_rt_ms"] = p.scale.upper_rt_ms;
  j["lower_rt_ms"] = p.scale.lower_rt_ms;
  j["wma_n"] = p.scale.wma_n;
  j["epsilon"] = p.scale.epsilon;
  j["lv_horizon"] = p.scale.lv_horizon;
  j["lv_step"] = p.scale.lv_step;
  j["rel_tol"] = p.scale.solver.rel_tol;
  j["abs_tol"] = p.scale.solver.abs_tol;
  j["dispatch"] = p.dispatch;
  j["baseline"] = p.baseline;
  j["lv"] = p.lv;
  return j;
}

// Starts from the preset named by "preset" (default "timeshared") and
// overrides whatever keys are present. Unknown keys are rejected.
inline Preset preset_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  Preset p = make_preset(j.value("preset", std::string("timeshared")));
  try {
    for (const auto& [key, v] : j.items()) {
      SimConfig& c = p.sim;
      if (key == "preset" || key == "kind") continue;
      if (key == "alpha") p.params.alpha = v.get<double>();
      else if (key == "beta") p.params.beta = v.get<double>();
      else if (key == "gamma") p.params.gamma = v.get<double>();
      else if (key == "delta") p.params.delta = v.get<double>();
      else if (key == "start_p") p.start.p = v.get<double>();
      else if (key == "start_q") p.start.q = v.get<double>();
      else if (key == "t_end") p.t_end = v.get<double>();
      else if (key == "sample_step") p.sample_step = v.get<double>();
      else if (key == "hosts") {
        c.hosts.clear();
        for (const auto& h : v) {
          HostSpec hs;
          hs.pes = h.value("pes", hs.pes);
          hs.mips_per_pe = h.value("mips_per_pe", hs.mips_per_pe);
          hs.ram_mb = h.value("ram_mb", hs.ram_mb);
          hs.bw_kbps = h.value("bw_kbps", hs.bw_kbps);
          hs.storage_gb = h.value("storage_gb", hs.storage_gb);
          c.hosts.push_back(hs);
        }
      } else if (key == "batches") {
        c.batches.clear();
        for (const auto& b : v) {
          BatchSpec bs;
          bs.vm_count = b.at("vm_count").get<int>();
          bs.cloudlet_count = b.at("cloudlet_count").get<int>();
          bs.deadline_ms = b.at("deadline_ms").get<double>();
          if (b.contains("start_ms")) bs.start_ms = b["start_ms"].get<double>();
          c.batches.push_back(bs);
        }
      }
      else if (key == "vm_mips") c.vm_template.mips = v.get<double>();
      else if (key == "vm_pes") c.vm_template.pes = v.get<int>();
      else if (key == "vm_ram_mb") c.vm_template.ram_mb = v.get<double>();
      else if (key == "vm_bw") c.vm_template.bw = v.get<double>();
      else if (key == "initial_vms") c.initial_vms = v.get<int>();
      else if (key == "vm_pool_size") c.vm_pool_size = v.get<int>();
      else if (key == "arrival_window_ms") c.arrival_window_ms = v.get<double>();
      else if (key == "monitor_interval_ms") c.monitor_interval_ms = v.get<double>();
      else if (key == "background_count") c.background.count_per_interval = v.get<int>();
      else if (key == "background_interval_ms") c.background.interval_ms = v.get<double>();
      else if (key == "background_until_ms") c.background.until_ms = v.get<double>();
      else if (key == "background_deadline_ms") c.background.deadline_ms = v.get<double>();
      else if (key == "vm_boot_delay_ms") c.vm_boot_delay_ms = v.get<double>();
      else if (key == "sim_horizon_ms") c.sim_horizon_ms = v.get<double>();
      else if (key == "cloudlet_length") c.cloudlet_length = v.get<double>();
      else if (key == "cloudlet_length_max") c.cloudlet_length_max = v.get<double>();
      else if (key == "cloudlet_pes") c.cloudlet_pes = v.get<int>();
      else if (key == "vm_mips_spread") c.vm_mips_spread = v.get<double>();
      else if (key == "max_threshold") p.scale.max_threshold = v.get<double>();
      else if (key == "min_threshold") p.scale.min_threshold = v.get<double>();
      else if (key == "upper_rt_ms") p.scale.upper_rt_ms = v.get<double>();
      else if (key == "lower_rt_ms") p.scale.lower_rt_ms = v.get<double>();
      else if (key == "wma_n") p.scale.wma_n = v.get<std::size_t>();
      else if (key == "epsilon") p.scale.epsilon = v.get<double>();
      else if (key == "lv_horizon") p.scale.lv_horizon = v.get<double>();
      else if (key == "lv_step") p.scale.lv_step = v.get<double>();
      else if (key == "rel_tol") p.scale.solver.rel_tol = v.get<double>();
      else if (key == "abs_tol") p.scale.solver.abs_tol = v.get<double>();
      else if (key == "dispatch") p.dispatch = v.get<std::string>();
      else if (key == "baseline") p.baseline = v.get<std::string>();
      else if (key == "lv") p.lv = v.get<std::string>();
      else throw ConfigError("unknown config key: " + key);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  p.scale.monitor_interval_ms = p.sim.monitor_interval_ms;
  if (p.trajectory) {
    p.params.validate();
  } else {
    p.sim.validate();
    p.scale.validate();
  }
  return p;
}

// FNV-1a over the canonical config dump.
inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string config_hash(const Preset& p) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(preset_to_json(p).dump())));
  return buf;
}

inline std::string file_banner(const Preset& p) {
  return "alvec config_hash=" + config_hash(p) + " preset=" + p.id;
}

// Per-phase and run-level QoS figures from a finished trace.
inline QoSReport make_report(const SimTrace& t, const SimConfig& cfg, std::string policy,
                             std::uint64_t seed) {
  QoSReport r;
  r.policy = std::move(policy);
  r.seed = seed;
  for (std::size_t k = 0; k < t.phase_labels.size(); ++k) {
    const auto cl = t.phase(static_cast<int>(k));
    PhaseReport ph;
    ph.phase = static_cast<int>(k);
    ph.label = t.phase_labels[k];
    ph.vm_count = k < cfg.batches.size() ? cfg.batches[k].vm_count : 0;
    ph.cloudlet_count = static_cast<int>(cl.size());
    ph.deadline_ms = cl.empty() ? 0.0 : cl.front().deadline;
    ph.sla_violation_rate = sla_rate(cl);
    double lo = 0.0, hi = t.end_time;
    for (const auto& c : cl) ph.completed += c.completed() ? 1 : 0;
    if (!cl.empty() && ph.completed == ph.cloudlet_count) {
      ph.avg_completion_ms = avg_completion(cl);
      ph.makespan_ms = makespan(cl);
      lo = cl.front().submit_time;
      hi = lo;
      for (const auto& c : cl) {
        lo = std::min(lo, c.submit_time);
        hi = std::max(hi, c.finish_time);
      }
    }
    double sum = 0.0;
    int n = 0;
    for (const auto& s : t.utilization) {
      if (s.time >= lo && s.time <= hi && s.online_vms > 0) {
        sum += s.avg_util;
        ++n;
      }
    }
    if (n > 0) ph.avg_vm_utilization = sum / n;
    r.phases.push_back(ph);
  }

  double sum = 0.0;
  int done = 0;
  for (const auto& c : t.cloudlets) {
    if (!c.completed()) continue;
    sum += c.completion_time();
    ++done;
  }
  if (done > 0) r.avg_completion_ms = sum / done;
  r.sla_violation_rate = sla_rate(t.cloudlets);
  r.avg_ram_util = t.avg_ram_util;
  r.avg_bw_util = t.avg_bw_util;
  r.vm_busy_fraction = t.busy_fraction();
  r.allocation_failures = static_cast<int>(t.failures.size());
  r.scaling_decisions = static_cast<int>(t.decisions.size());
  r.peak_vms = t.peak_vms;
  r.end_time_ms = t.end_time;
  return r;
}

struct RunOutcome {
  SimTrace trace;
  QoSReport report;
};

inline std::string policy_label(const Preset& p, const std::string& scaler) {
  if (scaler == "none" || scaler == p.dispatch) return p.dispatch;
  return p.dispatch + "+" + scaler;
}

inline RunOutcome run_simulation(const Preset& p, const std::string& scaler, std::uint64_t seed) {
  SimConfig cfg = p.sim;
  cfg.rng_seed = seed;
  ScalePolicyConfig sc = p.scale;
  sc.monitor_interval_ms = cfg.monitor_interval_ms;
  auto dispatcher = make_dispatch_policy(p.dispatch, cfg.vm_template.mips,
                                         seed ^ 0xD1B54A32D192ED03ULL);
  auto scaling = make_scaling_policy(scaler, sc);
  Simulation sim(cfg, *dispatcher, *scaling);
  RunOutcome out;
  out.trace = sim.run();
  out.report = make_report(out.trace, cfg, policy_label(p, scaler), seed);
  return out;
}

struct MetricTally {
  std::string metric;
  bool higher_is_better{false};
  int wins{0};  // LV side better
  int losses{0};
  int ties{0};
  double mean_delta{0.0};  // LV minus baseline
};

struct ComparisonSummary {
  int pairs{0};
  std::vector<MetricTally> metrics;
  int baseline_allocation_failures{0};
  int lv_allocation_failures{0};
};

inline ComparisonSummary compare(const std::vector<std::pair<QoSReport, QoSReport>>& pairs) {
  struct Metric {
    const char* name;
    bool higher;
    double (*get)(const QoSReport&);
  };
  static const Metric metrics[] = {
      {"sla_violation_rate", false, [](const QoSReport& r) { return r.sla_violation_rate; }},
      {"avg_completion_ms", false, [](const QoSReport& r) { return r.avg_completion_ms; }},
      {"vm_busy_fraction", true, [](const QoSReport& r) { return r.vm_busy_fraction; }},
      {"avg_ram_util", true, [](const QoSReport& r) { return r.avg_ram_util; }},
  };

  ComparisonSummary s;
  s.pairs = static_cast<int>(pairs.size());
  for (const auto& [base, lv] : pairs) {
    if (base.seed != lv.seed) throw PairingError("paired reports do not share a workload seed");
    s.baseline_allocation_failures += base.allocation_failures;
    s.lv_allocation_failures += lv.allocation_failures;
  }
  for (const auto& m : metrics) {
    MetricTally t;
    t.metric = m.name;
    t.higher_is_better = m.higher;
    int counted = 0;
    for (const auto& [base, lv] : pairs) {
      const double a = m.get(base), b = m.get(lv);
      if (std::isnan(a) || std::isnan(b)) continue;
      const double delta = b - a;
      t.mean_delta += delta;
      ++counted;
      if (std::abs(delta) <= 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)))) {
        ++t.ties;
      } else if ((delta < 0.0) != m.higher) {
        ++t.wins;
      } else {
        ++t.losses;
      }
    }
    if (counted > 0) t.mean_delta /= counted;
    s.metrics.push_back(t);
  }
  return s;
}

inline void write_summary(std::ostream& os, const ComparisonSummary& s) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "pairs: %d\n", s.pairs);
  os << buf;
  std::snprintf(buf, sizeof buf, "%-20s %6s %6s %6s %14s\n", "metric", "win", "loss", "tie",
                "mean delta");
  os << buf;
  for (const auto& t : s.metrics) {
    std::snprintf(buf, sizeof buf, "%-20s %6d %6d %6d %14.6g\n", t.metric.c_str(), t.wins,
                  t.losses, t.ties, t.mean_delta);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "allocation failures: baseline %d, lv %d%s\n",
                s.baseline_allocation_failures, s.lv_allocation_failures,
                s.lv_allocation_failures > 0 ? "  WARNING: LV runs hit allocation failures" : "");
  os << buf;
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << body;
}

inline std::string utilization_csv(const SimTrace& t) {
  std::ostringstream os;
  os << "time,online_vms,busy_vms,avg_util,avg_util_literal,active,queued\n";
  for (const auto& s : t.utilization) {
    os << num(s.time) << ',' << s.online_vms << ',' << s.busy_vms << ',' << num(s.avg_util) << ','
       << num(s.avg_util_literal) << ',' << s.active_cloudlets << ',' << s.queued_cloudlets
       << '\n';
  }
  return os.str();
}

}  // namespace detail

inline std::vector<std::string> write_trajectory_preset(const Preset& p,
                                                        const std::filesystem::path& dir) {
  const Trajectory traj = integrate(p.start, p.params, p.t_end, p.sample_step, p.scale.solver);
  std::ostringstream os;
  write_trajectory_csv(os, traj, {file_banner(p)});
  const auto path = dir / (p.id + "_trajectory.csv");
  detail::write_file(path, os.str());
  return {path.string()};
}

struct PresetRun {
  std::vector<std::pair<QoSReport, QoSReport>> pairs;  // (baseline, lv) per seed
  ComparisonSummary summary;
  std::vector<std::string> files;
};

// Runs both sides for every seed and writes per-seed traces, reports and a
// comparison table. File contents depend only on (preset, seeds).
inline PresetRun run_preset(const Preset& p, const std::vector<std::uint64_t>& seeds,
                            const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  PresetRun out;
  if (p.trajectory) {
    out.files = write_trajectory_preset(p, dir);
    return out;
  }
  const std::string banner = "# " + file_banner(p) + "\n";
  const std::string hash = config_hash(p);
  std::ostringstream table;
  table << banner;

  for (auto seed : seeds) {
    std::pair<QoSReport, QoSReport> pair;
    for (int side = 0; side < 2; ++side) {
      const std::string role = side == 0 ? "baseline" : "lv";
      const RunOutcome r = run_simulation(p, side == 0 ? p.baseline : p.lv, seed);
      const std::string stem = p.id + "_seed" + std::to_string(seed) + "_" + role;

      std::ostringstream cl, dec;
      cl << banner;
      write_cloudlets_csv(cl, r.trace);
      dec << banner;
      write_decisions_csv(dec, r.trace);
      nlohmann::json rep{{"config_hash", hash}, {"preset", p.id}, {"role", role},
                         {"report", r.report}};

      const auto files = {std::make_pair(dir / (stem + "_cloudlets.csv"), cl.str()),
                          std::make_pair(dir / (stem + "_decisions.csv"), dec.str()),
                          std::make_pair(dir / (stem + "_utilization.csv"),
                                         banner + detail::utilization_csv(r.trace)),
                          std::make_pair(dir / (stem + "_report.json"), rep.dump(2) + "\n")};
      for (const auto& [path, body] : files) {
        detail::write_file(path, body);
        out.files.push_back(path.string());
      }
      table << "seed " << seed << " " << role << " (" << r.report.policy << ")\n";
      write_qos_table(table, r.report);
      (side == 0 ? pair.first : pair.second) = r.report;
    }
    out.pairs.push_back(pair);
  }
  out.summary = compare(out.pairs);
  table << "\n";
  write_summary(table, out.summary);
  const auto path = dir / (p.id + "_comparison.txt");
  detail::write_file(path, table.str());
  out.files.push_back(path.string());
  return out;
}

// Pairs every *_report.json in dir by (preset, seed).
inline ComparisonSummary compare_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ConfigError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (name.size() > 12 && name.ends_with("_report.json")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());

  std::map<std::pair<std::string, std::uint64_t>, std::pair<std::vector<QoSReport>, std::vector<QoSReport>>> groups;
  for (const auto& f : files) {
    std::ifstream in(f);
    nlohmann::json j;
    try {
      in >> j;
      const auto rep = j.at("report").get<QoSReport>();
      auto& g = groups[{j.at("preset").get<std::string>(), rep.seed}];
      (j.at("role").get<std::string>() == "lv" ? g.second : g.first).push_back(rep);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("malformed report " + f.string() + ": " + e.what());
    }
  }
  std::vector<std::pair<QoSReport, QoSReport>> pairs;
  for (const auto& [key, g] : groups) {
    if (g.first.size() != 1 || g.second.size() != 1) {
      throw PairingError("preset " + key.first + " seed " + std::to_string(key.second) +
                         " lacks exactly one baseline and one LV report");
    }
    pairs.emplace_back(g.first.front(), g.second.front());
  }
  if (pairs.empty()) throw PairingError("no report pairs found in " + dir.string());
  return compare(pairs);
}

// Orbits from each start plus the two nullclines as extra series.
// Returns false if some orbit failed; its rows stop at a warning row.
inline bool write_phase_portrait(std::ostream& os, const LVParams& k,
                                 const std::vector<PopulationState>& starts, double t_end,
                                 double step, const SolverConfig& cfg, const std::string& banner) {
  k.validate();
  os << "# " << banner << "\n";
  os << "series,start_id,t,P,Q\n";
  bool ok = true;
  double pmax = k.gamma / k.delta, qmax = k.alpha / k.beta;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    try {
      const Trajectory traj = integrate(starts[i], k, t_end, step, cfg);
      for (const auto& s : traj.samples) {
        os << "orbit," << i << ',' << detail::num(s.t) << ',' << detail::num(s.p) << ','
           << detail::num(s.q) << '\n';
        pmax = std::max(pmax, s.p);
        qmax = std::max(qmax, s.q);
      }
    } catch (const Error&) {
      ok = false;
      os << "warning," << i << ",nan,nan,nan\n";
    }
  }
  const double ps = k.gamma / k.delta, qs = k.alpha / k.beta;
  os << "p_nullcline,-1,nan,0," << detail::num(qs) << '\n';
  os << "p_nullcline,-1,nan," << detail::num(1.1 * pmax) << ',' << detail::num(qs) << '\n';
  os << "q_nullcline,-1,nan," << detail::num(ps) << ",0\n";
  os << "q_nullcline,-1,nan," << detail::num(ps) << ',' << detail::num(1.1 * qmax) << '\n';
  return ok;
}

}  // namespace alvec
