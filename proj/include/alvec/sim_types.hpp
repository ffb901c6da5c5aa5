#pragma once

// Plain records shared by the simulator, the metrics and the controllers.

#include <alvec/error.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace alvec {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct HostSpec {
  int pes{4};
  double mips_per_pe{24000.0};
  double ram_mb{16384.0};
  double bw_kbps{10000.0};
  double storage_gb{1.0};

  void validate() const {
    if (pes < 1 || !(mips_per_pe > 0) || !(ram_mb > 0) || !(bw_kbps > 0) || !(storage_gb > 0)) {
      throw ConfigError("host spec fields must be positive");
    }
  }
};

struct VmSpec {
  double mips{100.0};  // instructions per ms, per PE
  int pes{1};
  double ram_mb{124.0};
  double bw{100.0};

  void validate() const {
    if (!(mips > 0) || pes < 1 || !(ram_mb > 0) || !(bw > 0)) {
      throw ConfigError("VM spec fields must be positive");
    }
  }
};

struct Cloudlet {
  int id{0};
  double length{40000.0};  // instructions
  int pes_required{1};
  double submit_time{0.0};
  double deadline{0.0};  // allowed completion interval, ms
  double start_time{kNaN};
  double finish_time{kNaN};
  int phase{0};
  int vm_id{-1};
  double remaining{0.0};

  [[nodiscard]] bool completed() const noexcept { return std::isfinite(finish_time); }
  [[nodiscard]] double completion_time() const noexcept { return finish_time - submit_time; }
};

struct DispatchDecision {
  int cloudlet_id{-1};
  int vm_id{-1};
  double decided_at{0.0};
};

enum class Trigger { UtilHigh, UtilLow, RtHigh, RtLow, None };

inline std::string_view to_string(Trigger t) {
  switch (t) {
    case Trigger::UtilHigh: return "UtilHigh";
    case Trigger::UtilLow: return "UtilLow";
    case Trigger::RtHigh: return "RtHigh";
    case Trigger::RtLow: return "RtLow";
    case Trigger::None: return "None";
  }
  return "?";
}

struct ScaleDecision {
  double time{0.0};
  Trigger trigger{Trigger::None};
  int current_vms{0};
  int target_vms{0};
  double lv_sample_time{kNaN};
  int applied_vms{0};  // VM count after the decision was carried out
  int shortfall{0};    // VMs the target asked for that could not be supplied

  [[nodiscard]] bool is_none() const noexcept { return trigger == Trigger::None; }
};

struct UtilSample {
  double time{0.0};
  int online_vms{0};
  int busy_vms{0};
  double avg_util{0.0};          // normalized, in [0, 1]
  double avg_util_literal{0.0};  // remaining-work form, not bounded
  int active_cloudlets{0};
  int queued_cloudlets{0};
};

struct AllocationFailure {
  double time{0.0};
  std::string reason;
};

struct VmRecord {
  int id{0};
  int host_id{-1};
  double mips{0.0};
  int pes{1};
  bool from_pool{false};
  double created_at{0.0};
  double serviceable_at{0.0};
  double released_at{kNaN};
  double busy_time{0.0};
};

// Deterministic generator with library-independent draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform01() * static_cast<double>(n));
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace alvec
