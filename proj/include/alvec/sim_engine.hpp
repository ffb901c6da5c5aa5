#pragma once

// Discrete-event data center: hosts, VMs, cloudlets, a broker queue and a
// time-shared execution model with analytic finish times.

#include <alvec/error.hpp>
#include <alvec/metrics.hpp>
#include <alvec/schedulers.hpp>
#include <alvec/sim_types.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <queue>
#include <span>
#include <string>
#include <vector>

namespace alvec {

struct BatchSpec {
  int vm_count{0};
  int cloudlet_count{0};
  double deadline_ms{1000.0};
  double start_ms{kNaN};  // NaN: batch index * 1000
};

// Steady trickle of extra cloudlets, kept in a phase of its own.
struct BackgroundSpec {
  int count_per_interval{0};
  double interval_ms{100.0};
  double until_ms{0.0};
  double deadline_ms{1000.0};
};

struct SimConfig {
  std::vector<HostSpec> hosts{HostSpec{4}, HostSpec{2}};
  VmSpec vm_template;
  int initial_vms{0};
  int vm_pool_size{0};
  std::vector<BatchSpec> batches;
  double arrival_window_ms{1000.0};
  double monitor_interval_ms{100.0};
  BackgroundSpec background;
  std::uint64_t rng_seed{1};
  double vm_boot_delay_ms{0.0};
  double sim_horizon_ms{1e7};
  double cloudlet_length{40000.0};
  double cloudlet_length_max{0.0};  // > cloudlet_length: uniform lengths in between
  int cloudlet_pes{1};
  double vm_mips_spread{0.0};  // per-VM MIPS drawn from template * (1 +- spread)

  // VMs of the template size that fit on the hosts.
  [[nodiscard]] int host_capacity_vms() const {
    const double mips = vm_template.mips * (1.0 + vm_mips_spread) * vm_template.pes;
    int total = 0;
    for (const auto& h : hosts) {
      const double by_mips = std::floor(h.pes * h.mips_per_pe / mips);
      const double by_ram = std::floor(h.ram_mb / vm_template.ram_mb);
      const double by_bw = std::floor(h.bw_kbps / vm_template.bw);
      total += static_cast<int>(std::min({by_mips, by_ram, by_bw}));
    }
    return total;
  }

  void validate() const {
    if (hosts.empty()) throw ConfigError("at least one host is required");
    for (const auto& h : hosts) h.validate();
    vm_template.validate();
    if (initial_vms < 0 || vm_pool_size < 0) throw ConfigError("VM counts must be non-negative");
    if (initial_vms > host_capacity_vms()) throw ConfigError("initial VMs exceed host capacity");
    for (const auto& b : batches) {
      if (b.vm_count < 0 || b.cloudlet_count < 0 || !(b.deadline_ms >= 0.0)) {
        throw ConfigError("batch fields must be non-negative");
      }
      if (!std::isnan(b.start_ms) && !(b.start_ms >= 0.0)) {
        throw ConfigError("batch start must be non-negative");
      }
    }
    if (!(arrival_window_ms >= 0.0)) throw ConfigError("arrival window must be non-negative");
    if (!(monitor_interval_ms > 0.0)) throw ConfigError("monitor interval must be positive");
    if (background.count_per_interval < 0 || !(background.interval_ms > 0.0) ||
        !(background.until_ms >= 0.0) || !(background.deadline_ms >= 0.0)) {
      throw ConfigError("background arrival fields are invalid");
    }
    if (!(vm_boot_delay_ms >= 0.0)) throw ConfigError("boot delay must be non-negative");
    if (!(sim_horizon_ms > 0.0)) throw ConfigError("horizon must be positive");
    if (!(cloudlet_length > 0.0)) throw ConfigError("cloudlet length must be positive");
    if (cloudlet_length_max != 0.0 && !(cloudlet_length_max >= cloudlet_length)) {
      throw ConfigError("cloudlet_length_max must be 0 or at least cloudlet_length");
    }
    if (cloudlet_pes < 1) throw ConfigError("cloudlet PEs must be at least 1");
    if (!(vm_mips_spread >= 0.0 && vm_mips_spread < 1.0)) {
      throw ConfigError("vm_mips_spread must lie in [0, 1)");
    }
  }
};

struct Workload {
  std::vector<Cloudlet> cloudlets;  // id == index
  std::vector<std::string> phase_labels;
};

// Batch cloudlets arrive uniformly over the window after their batch start;
// background cloudlets uniformly inside each interval.
inline Workload generate_workload(const SimConfig& cfg, Rng& rng) {
  Workload w;
  auto draw_length = [&] {
    if (cfg.cloudlet_length_max > cfg.cloudlet_length) {
      return std::round(rng.uniform(cfg.cloudlet_length, cfg.cloudlet_length_max));
    }
    return cfg.cloudlet_length;
  };
  auto add_phase = [&](std::vector<Cloudlet> phase) {
    std::stable_sort(phase.begin(), phase.end(),
                     [](const Cloudlet& a, const Cloudlet& b) { return a.submit_time < b.submit_time; });
    for (auto& c : phase) {
      c.id = static_cast<int>(w.cloudlets.size());
      c.remaining = c.length;
      w.cloudlets.push_back(c);
    }
  };

  for (std::size_t k = 0; k < cfg.batches.size(); ++k) {
    const auto& b = cfg.batches[k];
    const double start = std::isnan(b.start_ms) ? 1000.0 * static_cast<double>(k) : b.start_ms;
    std::vector<Cloudlet> phase;
    for (int i = 0; i < b.cloudlet_count; ++i) {
      Cloudlet c;
      c.submit_time = start + rng.uniform(0.0, cfg.arrival_window_ms);
      c.length = draw_length();
      c.pes_required = cfg.cloudlet_pes;
      c.deadline = b.deadline_ms;
      c.phase = static_cast<int>(k);
      phase.push_back(c);
    }
    add_phase(std::move(phase));
    w.phase_labels.push_back("batch" + std::to_string(k + 1));
  }

  const auto& bg = cfg.background;
  if (bg.count_per_interval > 0 && bg.until_ms > 0.0) {
    std::vector<Cloudlet> phase;
    for (double t = 0.0; t < bg.until_ms; t += bg.interval_ms) {
      for (int i = 0; i < bg.count_per_interval; ++i) {
        Cloudlet c;
        c.submit_time = t + rng.uniform(0.0, bg.interval_ms);
        c.length = draw_length();
        c.pes_required = cfg.cloudlet_pes;
        c.deadline = bg.deadline_ms;
        c.phase = static_cast<int>(cfg.batches.size());
        phase.push_back(c);
      }
    }
    add_phase(std::move(phase));
    w.phase_labels.emplace_back("background");
  }
  return w;
}

// Every active cloudlet gets an equal share of the VM's capacity for dt.
inline void timeshared_progress(const VmSpec& vm, std::span<double> remaining, double dt) {
  if (!(dt > 0.0)) throw InvalidParams("timeshared_progress needs dt > 0");
  if (remaining.empty()) return;
  const double share = vm.mips * vm.pes / static_cast<double>(remaining.size());
  for (auto& r : remaining) r = std::max(0.0, r - share * dt);
}

struct HostState {
  int id{0};
  HostSpec spec;
  double free_mips{0.0};
  double free_ram{0.0};
  double free_bw{0.0};
  int vm_count{0};

  HostState(int host_id, const HostSpec& s)
      : id(host_id), spec(s), free_mips(s.pes * s.mips_per_pe), free_ram(s.ram_mb),
        free_bw(s.bw_kbps) {}

  // Unused capacity in units of whole cores.
  [[nodiscard]] double free_pes() const { return free_mips / spec.mips_per_pe; }

  [[nodiscard]] bool fits(const VmSpec& vm) const {
    return free_mips >= vm.mips * vm.pes && free_ram >= vm.ram_mb && free_bw >= vm.bw;
  }
  void place(const VmSpec& vm) {
    free_mips -= vm.mips * vm.pes;
    free_ram -= vm.ram_mb;
    free_bw -= vm.bw;
    ++vm_count;
  }
  void remove(const VmSpec& vm) {
    free_mips += vm.mips * vm.pes;
    free_ram += vm.ram_mb;
    free_bw += vm.bw;
    --vm_count;
  }
};

// Host with the most free cores that fits the VM, ties to the lowest id.
// Returns the host index, or nothing if no host fits.
inline std::optional<std::size_t> allocate_vm(std::vector<HostState>& hosts, const VmSpec& vm) {
  vm.validate();
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < hosts.size(); ++i) {
    if (!hosts[i].fits(vm)) continue;
    if (!best || hosts[i].free_pes() > hosts[*best].free_pes()) best = i;
  }
  if (best) hosts[*best].place(vm);
  return best;
}

struct SimTrace {
  std::vector<Cloudlet> cloudlets;
  std::vector<std::string> phase_labels;
  std::vector<ScaleDecision> decisions;
  std::vector<UtilSample> utilization;
  std::vector<AllocationFailure> failures;
  std::vector<VmRecord> vms;
  std::vector<DispatchDecision> dispatches;
  double end_time{0.0};
  std::int64_t events_processed{0};
  int monitor_ticks{0};
  double avg_ram_util{0.0};
  double avg_bw_util{0.0};
  int peak_vms{0};

  // Busy time over online time, summed across VMs.
  [[nodiscard]] double busy_fraction() const {
    double busy = 0.0, online = 0.0;
    for (const auto& v : vms) {
      const double until = std::isnan(v.released_at) ? end_time : v.released_at;
      busy += v.busy_time;
      online += until - v.serviceable_at;
    }
    return online > 0.0 ? busy / online : 0.0;
  }

  [[nodiscard]] std::vector<Cloudlet> phase(int k) const {
    std::vector<Cloudlet> out;
    for (const auto& c : cloudlets) {
      if (c.phase == k) out.push_back(c);
    }
    return out;
  }
};

class Simulation;

// Hooks for elasticity controllers. The default does nothing and admits
// every cloudlet.
class ScalingPolicy {
 public:
  virtual ~ScalingPolicy() = default;
  [[nodiscard]] virtual std::string name() const { return "none"; }
  virtual void on_tick(Simulation&) {}
  // Consulted before each dispatch; false holds the queue.
  virtual bool admit(Simulation&) { return true; }
  virtual void on_complete(Simulation&, const Cloudlet&) {}
};

class Simulation {
 public:
  Simulation(SimConfig cfg, DispatchPolicy& dispatcher, ScalingPolicy& scaler)
      : cfg_(std::move(cfg)), dispatcher_(dispatcher), scaler_(scaler),
        vm_rng_(cfg_.rng_seed ^ 0x9E3779B97F4A7C15ULL) {
    cfg_.validate();
    for (std::size_t i = 0; i < cfg_.hosts.size(); ++i) {
      hosts_.emplace_back(static_cast<int>(i), cfg_.hosts[i]);
      total_ram_ += cfg_.hosts[i].ram_mb;
      total_bw_ += cfg_.hosts[i].bw_kbps;
    }
    Rng workload_rng(cfg_.rng_seed);
    auto w = generate_workload(cfg_, workload_rng);
    trace_.cloudlets = std::move(w.cloudlets);
    trace_.phase_labels = std::move(w.phase_labels);
  }

  SimTrace run() {
    if (ran_) throw Error("simulation already ran");
    ran_ = true;

    for (int i = 0; i < cfg_.initial_vms; ++i) create_vm(false);
    for (std::size_t k = 0; k < cfg_.batches.size(); ++k) {
      const double s = cfg_.batches[k].start_ms;
      push(std::isnan(s) ? 1000.0 * static_cast<double>(k) : s, Kind::Batch,
           static_cast<int>(k));
    }
    for (const auto& c : trace_.cloudlets) push(c.submit_time, Kind::Arrival, c.id);
    pending_arrivals_ = static_cast<int>(trace_.cloudlets.size());
    push(0.0, Kind::Tick, 0);

    while (!events_.empty()) {
      const Event ev = events_.top();
      if (ev.time > cfg_.sim_horizon_ms) break;
      events_.pop();
      if (ev.kind == Kind::Finish && (vms_[ev.a].version != ev.b || vms_[ev.a].released)) continue;
      if (ev.time < now_) throw Error("event scheduled in the past");
      account(ev.time);
      now_ = ev.time;
      ++trace_.events_processed;

      switch (ev.kind) {
        case Kind::Arrival:
          queue_.push_back(ev.a);
          --pending_arrivals_;
          break;
        case Kind::Finish:
          finish(ev.a);
          break;
        case Kind::Tick:
          tick();
          break;
        case Kind::Boot:
          vms_[ev.a].serviceable = true;
          break;
        case Kind::Batch:
          set_base(cfg_.batches[ev.a].vm_count);
          break;
      }
      try_dispatch();
    }

    for (auto& v : vms_) {
      if (!v.released) advance(v);
    }
    trace_.end_time = now_;
    if (now_ > 0.0) {
      trace_.avg_ram_util = ram_integral_ / (now_ * total_ram_);
      trace_.avg_bw_util = bw_integral_ / (now_ * total_bw_);
    }
    trace_.vms.clear();
    for (const auto& v : vms_) trace_.vms.push_back(v.rec);
    return std::move(trace_);
  }

  // Controller-facing view of the cluster.

  [[nodiscard]] double now() const noexcept { return now_; }
  [[nodiscard]] const SimConfig& config() const noexcept { return cfg_; }

  [[nodiscard]] int online_vms() const {
    int n = 0;
    for (const auto& v : vms_) n += v.released ? 0 : 1;
    return n;
  }
  [[nodiscard]] int serviceable_vms() const {
    int n = 0;
    for (const auto& v : vms_) n += (!v.released && v.serviceable) ? 1 : 0;
    return n;
  }
  [[nodiscard]] int busy_vms() const {
    int n = 0;
    for (const auto& v : vms_) n += (!v.released && !v.active.empty()) ? 1 : 0;
    return n;
  }
  [[nodiscard]] int active_cloudlets() const noexcept { return active_total_; }
  [[nodiscard]] int queued_cloudlets() const noexcept { return static_cast<int>(queue_.size()); }
  [[nodiscard]] int pool_remaining() const noexcept { return cfg_.vm_pool_size - pool_in_use_; }

  // Mean normalized utilization over serviceable VMs; 0 with none online.
  [[nodiscard]] double avg_utilization() const {
    std::vector<VmLoad> loads;
    for (const auto& v : vms_) {
      if (v.released || !v.serviceable) continue;
      const double cap = v.rec.mips * v.rec.pes;
      loads.push_back({cap, v.active.empty() ? 0.0 : cap});
    }
    return alvec::avg_utilization(loads).value_or(0.0);
  }

  // Acquires up to n VMs from the pool. Returns how many were placed.
  int acquire_vms(int n) {
    int got = 0;
    while (got < n && pool_remaining() > 0) {
      if (!create_vm(true)) break;
      ++got;
    }
    return got;
  }

  // Releases up to n VMs that run no cloudlet, pool VMs and newest first.
  // At least one VM always stays online.
  int release_idle_vms(int n, bool pool_only = false) {
    std::vector<std::size_t> idle;
    for (std::size_t i = 0; i < vms_.size(); ++i) {
      const auto& v = vms_[i];
      if (v.released || !v.active.empty()) continue;
      if (pool_only && !v.rec.from_pool) continue;
      idle.push_back(i);
    }
    std::sort(idle.begin(), idle.end(), [&](std::size_t a, std::size_t b) {
      if (vms_[a].rec.from_pool != vms_[b].rec.from_pool) return vms_[a].rec.from_pool;
      return a > b;
    });
    int released = 0;
    for (std::size_t i : idle) {
      if (released >= n || online_vms() <= 1) break;
      release(vms_[i]);
      ++released;
    }
    return released;
  }

  void record_decision(const ScaleDecision& d) { trace_.decisions.push_back(d); }

 private:
  enum class Kind { Arrival, Finish, Tick, Boot, Batch };

  struct Event {
    double time;
    std::uint64_t seq;
    Kind kind;
    int a;
    int b;
  };
  struct Later {
    bool operator()(const Event& x, const Event& y) const {
      if (x.time != y.time) return x.time > y.time;
      return x.seq > y.seq;
    }
  };

  struct Vm {
    VmRecord rec;
    std::size_t host{0};
    std::vector<int> active;
    double last_update{0.0};
    int version{0};
    bool serviceable{false};
    bool released{false};
  };

  void push(double t, Kind k, int a, int b = 0) { events_.push({t, seq_++, k, a, b}); }

  [[nodiscard]] VmSpec spec_of(const Vm& v) const {
    VmSpec s = cfg_.vm_template;
    s.mips = v.rec.mips;
    return s;
  }

  bool create_vm(bool from_pool) {
    VmSpec spec = cfg_.vm_template;
    if (cfg_.vm_mips_spread > 0.0) {
      spec.mips = std::round(spec.mips * (1.0 + vm_rng_.uniform(-cfg_.vm_mips_spread,
                                                                 cfg_.vm_mips_spread)));
    }
    const auto host = allocate_vm(hosts_, spec);
    if (!host) {
      trace_.failures.push_back({now_, "no host fits VM"});
      return false;
    }
    Vm v;
    v.rec.id = static_cast<int>(vms_.size());
    v.rec.host_id = hosts_[*host].id;
    v.rec.mips = spec.mips;
    v.rec.pes = spec.pes;
    v.rec.from_pool = from_pool;
    v.rec.created_at = now_;
    v.rec.serviceable_at = now_ + cfg_.vm_boot_delay_ms;
    v.host = *host;
    v.last_update = now_;
    v.serviceable = cfg_.vm_boot_delay_ms == 0.0;
    if (!v.serviceable) push(v.rec.serviceable_at, Kind::Boot, v.rec.id);
    vms_.push_back(std::move(v));
    if (from_pool) ++pool_in_use_;
    ram_alloc_ += spec.ram_mb;
    bw_alloc_ += spec.bw;
    trace_.peak_vms = std::max(trace_.peak_vms, online_vms());
    return true;
  }

  void release(Vm& v) {
    advance(v);
    v.released = true;
    ++v.version;
    v.rec.released_at = now_;
    if (!v.serviceable) v.rec.serviceable_at = now_;
    const VmSpec spec = spec_of(v);
    hosts_[v.host].remove(spec);
    if (v.rec.from_pool) --pool_in_use_;
    ram_alloc_ -= spec.ram_mb;
    bw_alloc_ -= spec.bw;
  }

  // A batch brings its own VM count: add base VMs up to n, or return idle
  // base VMs above n. Busy ones stay until the next batch.
  void set_base(int n) {
    int base = 0;
    for (const auto& v : vms_) base += (!v.released && !v.rec.from_pool) ? 1 : 0;
    for (; base < n; ++base) {
      if (!create_vm(false)) break;
    }
    for (std::size_t i = vms_.size(); i-- > 0 && base > n;) {
      Vm& v = vms_[i];
      if (v.released || v.rec.from_pool || !v.active.empty() || online_vms() <= 1) continue;
      release(v);
      --base;
    }
  }

  void account(double t) {
    const double dt = t - now_;
    ram_integral_ += ram_alloc_ * dt;
    bw_integral_ += bw_alloc_ * dt;
  }

  void advance(Vm& v) {
    const double dt = now_ - v.last_update;
    if (dt > 0.0 && !v.active.empty()) {
      std::vector<double> rem;
      rem.reserve(v.active.size());
      for (int id : v.active) rem.push_back(trace_.cloudlets[id].remaining);
      timeshared_progress(spec_of(v), rem, dt);
      for (std::size_t i = 0; i < v.active.size(); ++i) trace_.cloudlets[v.active[i]].remaining = rem[i];
      v.rec.busy_time += dt;
    }
    v.last_update = now_;
  }

  void reschedule(Vm& v) {
    ++v.version;
    if (v.active.empty()) return;
    double least = trace_.cloudlets[v.active.front()].remaining;
    for (int id : v.active) least = std::min(least, trace_.cloudlets[id].remaining);
    const double share = v.rec.mips * v.rec.pes / static_cast<double>(v.active.size());
    push(now_ + least / share, Kind::Finish, v.rec.id, v.version);
  }

  void finish(int vm_id) {
    Vm& v = vms_[vm_id];
    advance(v);
    std::vector<int> still;
    std::vector<int> done;
    for (int id : v.active) {
      const Cloudlet& c = trace_.cloudlets[id];
      (c.remaining <= 1e-9 * c.length + 1e-6 ? done : still).push_back(id);
    }
    v.active = std::move(still);
    for (int id : done) {
      Cloudlet& c = trace_.cloudlets[id];
      c.remaining = 0.0;
      c.finish_time = now_;
      --active_total_;
    }
    reschedule(v);
    for (int id : done) scaler_.on_complete(*this, trace_.cloudlets[id]);
  }

  void tick() {
    ++trace_.monitor_ticks;
    UtilSample s;
    s.time = now_;
    double literal = 0.0;
    for (auto& v : vms_) {
      if (v.released || !v.serviceable) continue;
      advance(v);
      std::vector<ResidentCloudlet> res;
      for (int id : v.active) res.push_back({trace_.cloudlets[id].remaining, trace_.cloudlets[id].pes_required});
      literal += vm_utilization(spec_of(v), res);
      ++s.online_vms;
      s.busy_vms += v.active.empty() ? 0 : 1;
    }
    s.avg_util = avg_utilization();
    s.avg_util_literal = s.online_vms > 0 ? literal / s.online_vms : 0.0;
    s.active_cloudlets = active_total_;
    s.queued_cloudlets = queued_cloudlets();
    trace_.utilization.push_back(s);

    scaler_.on_tick(*this);

    const double next = now_ + cfg_.monitor_interval_ms;
    if (work_remains() && next <= cfg_.sim_horizon_ms) push(next, Kind::Tick, 0);
  }

  [[nodiscard]] bool work_remains() const {
    return pending_arrivals_ > 0 || !queue_.empty() || active_total_ > 0;
  }

  void try_dispatch() {
    while (!queue_.empty()) {
      if (!scaler_.admit(*this)) return;
      std::vector<QueuedCloudlet> q;
      q.reserve(queue_.size());
      for (int id : queue_) {
        const auto& c = trace_.cloudlets[id];
        q.push_back({c.id, c.length, c.submit_time});
      }
      std::vector<VmView> views;
      for (const auto& v : vms_) {
        if (v.released) continue;
        double backlog = 0.0;
        for (int id : v.active) backlog += trace_.cloudlets[id].remaining;
        views.push_back({v.rec.id, v.rec.mips, v.rec.pes, static_cast<int>(v.active.size()),
                         backlog, v.serviceable});
      }
      const auto d = dispatcher_.next(q, views, now_);
      if (!d) return;
      bind(*d);
    }
  }

  void bind(const DispatchDecision& d) {
    const auto it = std::find(queue_.begin(), queue_.end(), d.cloudlet_id);
    if (it == queue_.end()) throw Error("dispatcher chose a cloudlet that is not queued");
    if (d.vm_id < 0 || d.vm_id >= static_cast<int>(vms_.size()) || vms_[d.vm_id].released ||
        !vms_[d.vm_id].serviceable) {
      throw Error("dispatcher chose a VM that is not serviceable");
    }
    queue_.erase(it);
    Vm& v = vms_[d.vm_id];
    advance(v);
    Cloudlet& c = trace_.cloudlets[d.cloudlet_id];
    c.start_time = now_;
    c.vm_id = d.vm_id;
    v.active.push_back(c.id);
    ++active_total_;
    trace_.dispatches.push_back(d);
    reschedule(v);
  }

  SimConfig cfg_;
  DispatchPolicy& dispatcher_;
  ScalingPolicy& scaler_;
  Rng vm_rng_;
  std::vector<HostState> hosts_;
  std::vector<Vm> vms_;
  std::vector<int> queue_;
  std::priority_queue<Event, std::vector<Event>, Later> events_;
  std::uint64_t seq_{0};
  SimTrace trace_;
  double now_{0.0};
  int pending_arrivals_{0};
  int active_total_{0};
  int pool_in_use_{0};
  double total_ram_{0.0}, total_bw_{0.0};
  double ram_alloc_{0.0}, bw_alloc_{0.0};
  double ram_integral_{0.0}, bw_integral_{0.0};
  bool ran_{false};
};

namespace detail {

inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline void write_cloudlets_csv(std::ostream& os, const SimTrace& t) {
  os << "id,phase,submit,start,finish,deadline,vm_id\n";
  for (const auto& c : t.cloudlets) {
    os << c.id << ',' << c.phase << ',' << detail::num(c.submit_time) << ','
       << detail::num(c.start_time) << ',' << detail::num(c.finish_time) << ','
       << detail::num(c.deadline) << ',' << c.vm_id << '\n';
  }
}

inline void write_decisions_csv(std::ostream& os, const SimTrace& t) {
  os << "time,trigger,current,target,applied,shortfall,lv_sample_time\n";
  for (const auto& d : t.decisions) {
    os << detail::num(d.time) << ',' << to_string(d.trigger) << ',' << d.current_vms << ','
       << d.target_vms << ',' << d.applied_vms << ',' << d.shortfall << ','
       << detail::num(d.lv_sample_time) << '\n';
  }
}

}  // namespace alvec
