#pragma once

// QoS metrics over simulation traces: utilization, average completion time,
// makespan and SLA violation rate.

#include <alvec/error.hpp>
#include <alvec/sim_types.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace alvec {

struct ResidentCloudlet {
  double length{0.0};  // remaining instructions
  int pes{1};
};

// Sum of length * PEs over resident cloudlets divided by PEs * MIPS. Carries
// time units and is not bounded by 1; threshold logic uses the normalized form.
inline double vm_utilization(const VmSpec& vm, std::span<const ResidentCloudlet> cloudlets) {
  double work = 0.0;
  for (const auto& c : cloudlets) work += c.length * static_cast<double>(c.pes);
  return work / (static_cast<double>(vm.pes) * vm.mips);
}

struct VmLoad {
  double capacity_mips{100.0};  // pes * mips
  double consumed_mips{0.0};
};

inline double utilization_fraction(const VmLoad& load) {
  return std::min(1.0, load.consumed_mips / load.capacity_mips);
}

// Mean normalized utilization; empty when no VM is online.
inline std::optional<double> avg_utilization(std::span<const VmLoad> online) {
  if (online.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& l : online) sum += utilization_fraction(l);
  return sum / static_cast<double>(online.size());
}

namespace detail {

inline void require_complete(std::span<const Cloudlet> phase) {
  if (phase.empty()) throw PartialPhase("phase has no cloudlets");
  for (const auto& c : phase) {
    if (!c.completed()) throw PartialPhase("phase has an incomplete cloudlet");
  }
}

}  // namespace detail

// Mean of finish - submit.
inline double avg_completion(std::span<const Cloudlet> phase) {
  detail::require_complete(phase);
  double sum = 0.0;
  for (const auto& c : phase) sum += c.completion_time();
  return sum / static_cast<double>(phase.size());
}

// Last finish minus first submission.
inline double makespan(std::span<const Cloudlet> phase) {
  detail::require_complete(phase);
  double first = phase.front().submit_time;
  double last = phase.front().finish_time;
  for (const auto& c : phase) {
    first = std::min(first, c.submit_time);
    last = std::max(last, c.finish_time);
  }
  return last - first;
}

// Fraction of cloudlets whose completion interval exceeds the deadline.
// Unfinished cloudlets count as violations. finish - submit picks up rounding
// noise, so a cloudlet finishing exactly on its deadline is not late.
inline double sla_rate(std::span<const Cloudlet> phase) {
  if (phase.empty()) return 0.0;
  std::size_t late = 0;
  for (const auto& c : phase) {
    const double slack = 1e-9 * std::max(1.0, std::abs(c.finish_time));
    if (!c.completed() || c.completion_time() > c.deadline + slack) ++late;
  }
  return static_cast<double>(late) / static_cast<double>(phase.size());
}

struct PhaseReport {
  int phase{0};
  std::string label;
  int vm_count{0};
  int cloudlet_count{0};
  int completed{0};
  double deadline_ms{0.0};
  double avg_completion_ms{kNaN};
  double makespan_ms{kNaN};
  double sla_violation_rate{0.0};
  double avg_vm_utilization{kNaN};
};

struct QoSReport {
  std::string policy;
  std::uint64_t seed{0};
  std::vector<PhaseReport> phases;
  double avg_completion_ms{kNaN};  // over every cloudlet of the run
  double sla_violation_rate{0.0};
  double avg_ram_util{0.0};
  double avg_bw_util{0.0};
  double vm_busy_fraction{0.0};
  int allocation_failures{0};
  int scaling_decisions{0};
  int peak_vms{0};
  double end_time_ms{0.0};
};

inline void to_json(nlohmann::json& j, const PhaseReport& p) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); };
  j = nlohmann::json{{"phase", p.phase},
                     {"label", p.label},
                     {"vm_count", p.vm_count},
                     {"cloudlet_count", p.cloudlet_count},
                     {"completed", p.completed},
                     {"deadline_ms", p.deadline_ms},
                     {"avg_completion_ms", num(p.avg_completion_ms)},
                     {"makespan_ms", num(p.makespan_ms)},
                     {"sla_violation_rate", num(p.sla_violation_rate)},
                     {"avg_vm_utilization", num(p.avg_vm_utilization)}};
}

inline void from_json(const nlohmann::json& j, PhaseReport& p) {
  auto num = [&](const char* key) {
    return j.at(key).is_null() ? kNaN : j.at(key).get<double>();
  };
  p.phase = j.at("phase").get<int>();
  p.label = j.at("label").get<std::string>();
  p.vm_count = j.at("vm_count").get<int>();
  p.cloudlet_count = j.at("cloudlet_count").get<int>();
  p.completed = j.at("completed").get<int>();
  p.deadline_ms = j.at("deadline_ms").get<double>();
  p.avg_completion_ms = num("avg_completion_ms");
  p.makespan_ms = num("makespan_ms");
  p.sla_violation_rate = num("sla_violation_rate");
  p.avg_vm_utilization = num("avg_vm_utilization");
}

inline void to_json(nlohmann::json& j, const QoSReport& r) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); };
  j = nlohmann::json{{"policy", r.policy},
                     {"seed", r.seed},
                     {"phases", r.phases},
                     {"avg_completion_ms", num(r.avg_completion_ms)},
                     {"sla_violation_rate", num(r.sla_violation_rate)},
                     {"avg_ram_util", num(r.avg_ram_util)},
                     {"avg_bw_util", num(r.avg_bw_util)},
                     {"vm_busy_fraction", num(r.vm_busy_fraction)},
                     {"allocation_failures", r.allocation_failures},
                     {"scaling_decisions", r.scaling_decisions},
                     {"peak_vms", r.peak_vms},
                     {"end_time_ms", num(r.end_time_ms)}};
}

inline void from_json(const nlohmann::json& j, QoSReport& r) {
  auto num = [&](const char* key) {
    return j.at(key).is_null() ? kNaN : j.at(key).get<double>();
  };
  r.policy = j.at("policy").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.phases = j.at("phases").get<std::vector<PhaseReport>>();
  r.avg_completion_ms = num("avg_completion_ms");
  r.sla_violation_rate = num("sla_violation_rate");
  r.avg_ram_util = num("avg_ram_util");
  r.avg_bw_util = num("avg_bw_util");
  r.vm_busy_fraction = num("vm_busy_fraction");
  r.allocation_failures = j.at("allocation_failures").get<int>();
  r.scaling_decisions = j.at("scaling_decisions").get<int>();
  r.peak_vms = j.at("peak_vms").get<int>();
  r.end_time_ms = num("end_time_ms");
}

// Table with the columns VM, cloudlets, Avg Req Compln time, SLA violation,
// MakeSpan.
inline void write_qos_table(std::ostream& os, const QoSReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-12s %6s %10s %22s %14s %12s\n", "Phase", "VM", "cloudlets",
                "Avg Req Compln time", "SLA violation", "MakeSpan");
  os << buf;
  for (const auto& p : r.phases) {
    std::snprintf(buf, sizeof buf, "%-12s %6d %10d %22.2f %14.3f %12.2f\n", p.label.c_str(),
                  p.vm_count, p.cloudlet_count, p.avg_completion_ms, p.sla_violation_rate,
                  p.makespan_ms);
    os << buf;
  }
}

}  // namespace alvec
