#pragma once

// Baseline cloudlet-to-VM dispatch heuristics. The free functions are pure
// over a queue snapshot; the policy classes wrap them for the event loop.

#include <alvec/error.hpp>
#include <alvec/sim_types.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace alvec {

struct QueuedCloudlet {
  int id{0};
  double length{0.0};
  double submit_time{0.0};
};

struct VmView {
  int id{0};
  double mips{100.0};
  int pes{1};
  int active{0};         // cloudlets currently resident
  double backlog{0.0};   // remaining instructions of resident cloudlets
  bool serviceable{true};
};

namespace detail {

inline void require_queue(std::span<const QueuedCloudlet> queue) {
  if (queue.empty()) throw InvalidParams("dispatch needs a non-empty queue");
}

inline bool fcfs_before(const QueuedCloudlet& a, const QueuedCloudlet& b) {
  if (a.submit_time != b.submit_time) return a.submit_time < b.submit_time;
  return a.id < b.id;
}

inline std::size_t fcfs_index(std::span<const QueuedCloudlet> queue) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < queue.size(); ++i) {
    if (fcfs_before(queue[i], queue[best])) best = i;
  }
  return best;
}

// Fewest resident cloudlets, ties to the lowest id.
inline std::optional<int> least_active_vm(std::span<const VmView> vms) {
  const VmView* best = nullptr;
  for (const auto& v : vms) {
    if (!v.serviceable) continue;
    if (!best || v.active < best->active || (v.active == best->active && v.id < best->id)) {
      best = &v;
    }
  }
  if (!best) return std::nullopt;
  return best->id;
}

inline std::vector<const VmView*> serviceable_by_id(std::span<const VmView> vms) {
  std::vector<const VmView*> out;
  for (const auto& v : vms) {
    if (v.serviceable) out.push_back(&v);
  }
  std::sort(out.begin(), out.end(), [](const VmView* a, const VmView* b) { return a->id < b->id; });
  return out;
}

// Shortest (or longest) dedicated-VM estimate; equal estimates keep FCFS order.
inline std::size_t by_estimate(std::span<const QueuedCloudlet> queue, double template_mips,
                               bool longest) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < queue.size(); ++i) {
    const double ei = queue[i].length / template_mips;
    const double eb = queue[best].length / template_mips;
    const bool better = longest ? ei > eb : ei < eb;
    if (better || (ei == eb && fcfs_before(queue[i], queue[best]))) best = i;
  }
  return best;
}

}  // namespace detail

inline std::optional<DispatchDecision> fcfs(std::span<const QueuedCloudlet> queue,
                                            std::span<const VmView> vms, double now = 0.0) {
  detail::require_queue(queue);
  const auto vm = detail::least_active_vm(vms);
  if (!vm) return std::nullopt;
  return DispatchDecision{queue[detail::fcfs_index(queue)].id, *vm, now};
}

struct RrCursor {
  std::size_t next{0};  // position in the id-ordered serviceable VM list
  int served{0};        // cloudlets given to that VM in the current cycle
};

// weights[i] applies to the i-th serviceable VM by id; missing entries count 1.
inline std::optional<DispatchDecision> round_robin(std::span<const QueuedCloudlet> queue,
                                                   std::span<const VmView> vms, RrCursor& cursor,
                                                   std::span<const double> weights = {},
                                                   double now = 0.0) {
  detail::require_queue(queue);
  const auto order = detail::serviceable_by_id(vms);
  if (order.empty()) return std::nullopt;
  const std::size_t pos = cursor.next % order.size();
  const double w = pos < weights.size() ? weights[pos] : 1.0;
  const int quota = std::max(1, static_cast<int>(std::ceil(w)));

  DispatchDecision d{queue[detail::fcfs_index(queue)].id, order[pos]->id, now};
  if (++cursor.served >= quota) {
    cursor.served = 0;
    cursor.next = (pos + 1) % order.size();
  } else {
    cursor.next = pos;
  }
  return d;
}

inline std::optional<DispatchDecision> sjf(std::span<const QueuedCloudlet> queue,
                                           std::span<const VmView> vms, double template_mips,
                                           double now = 0.0) {
  detail::require_queue(queue);
  const auto vm = detail::least_active_vm(vms);
  if (!vm) return std::nullopt;
  return DispatchDecision{queue[detail::by_estimate(queue, template_mips, false)].id, *vm, now};
}

inline std::optional<DispatchDecision> ljf(std::span<const QueuedCloudlet> queue,
                                           std::span<const VmView> vms, double template_mips,
                                           double now = 0.0) {
  detail::require_queue(queue);
  const auto vm = detail::least_active_vm(vms);
  if (!vm) return std::nullopt;
  return DispatchDecision{queue[detail::by_estimate(queue, template_mips, true)].id, *vm, now};
}

// Opportunistic load balancing: any idle VM first, otherwise any VM at random.
inline std::optional<DispatchDecision> olb(std::span<const QueuedCloudlet> queue,
                                           std::span<const VmView> vms, Rng& rng,
                                           double now = 0.0) {
  detail::require_queue(queue);
  const auto order = detail::serviceable_by_id(vms);
  if (order.empty()) return std::nullopt;
  std::vector<const VmView*> idle;
  for (const auto* v : order) {
    if (v->active == 0) idle.push_back(v);
  }
  const auto& pick_from = idle.empty() ? order : idle;
  const VmView* vm = pick_from[rng.index(pick_from.size())];
  return DispatchDecision{queue[detail::fcfs_index(queue)].id, vm->id, now};
}

// Batch min-min over the ready set. Completion C[i][j] = avail_j + len_i/mips_j,
// with avail_j seeded from the VM's resident backlog.
inline std::vector<DispatchDecision> min_min(std::span<const QueuedCloudlet> ready,
                                             std::span<const VmView> vms, double now = 0.0) {
  detail::require_queue(ready);
  const auto order = detail::serviceable_by_id(vms);
  std::vector<DispatchDecision> out;
  if (order.empty()) return out;

  std::vector<double> avail;
  for (const auto* v : order) avail.push_back(v->backlog / v->mips);
  std::vector<QueuedCloudlet> left(ready.begin(), ready.end());
  std::sort(left.begin(), left.end(), detail::fcfs_before);

  while (!left.empty()) {
    std::size_t bi = 0, bj = 0;
    double bc = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < left.size(); ++i) {
      for (std::size_t j = 0; j < order.size(); ++j) {
        const double c = avail[j] + left[i].length / order[j]->mips;
        if (c < bc) {
          bc = c;
          bi = i;
          bj = j;
        }
      }
    }
    out.push_back({left[bi].id, order[bj]->id, now});
    avail[bj] = bc;
    left.erase(left.begin() + static_cast<std::ptrdiff_t>(bi));
  }
  return out;
}

class DispatchPolicy {
 public:
  virtual ~DispatchPolicy() = default;
  [[nodiscard]] virtual std::string name() const = 0;
  // One cloudlet and its VM, or nothing when no VM is serviceable.
  virtual std::optional<DispatchDecision> next(std::span<const QueuedCloudlet> queue,
                                               std::span<const VmView> vms, double now) = 0;
};

class FcfsPolicy : public DispatchPolicy {
 public:
  explicit FcfsPolicy(std::string label = "fcfs") : label_(std::move(label)) {}
  [[nodiscard]] std::string name() const override { return label_; }
  std::optional<DispatchDecision> next(std::span<const QueuedCloudlet> q,
                                       std::span<const VmView> vms, double now) override {
    return fcfs(q, vms, now);
  }

 private:
  std::string label_;
};

class RoundRobinPolicy : public DispatchPolicy {
 public:
  // weighted without explicit weights: each VM's MIPS relative to the template.
  RoundRobinPolicy(bool weighted, double template_mips, std::vector<double> weights = {})
      : weighted_(weighted), template_mips_(template_mips), weights_(std::move(weights)) {}

  [[nodiscard]] std::string name() const override { return weighted_ ? "wrr" : "rr"; }

  std::optional<DispatchDecision> next(std::span<const QueuedCloudlet> q,
                                       std::span<const VmView> vms, double now) override {
    if (!weighted_ || !weights_.empty()) return round_robin(q, vms, cursor_, weights_, now);
    std::vector<double> w;
    for (const auto* v : detail::serviceable_by_id(vms)) w.push_back(v->mips / template_mips_);
    return round_robin(q, vms, cursor_, w, now);
  }

 private:
  bool weighted_;
  double template_mips_;
  std::vector<double> weights_;
  RrCursor cursor_;
};

class EstimatePolicy : public DispatchPolicy {
 public:
  EstimatePolicy(bool longest, double template_mips)
      : longest_(longest), template_mips_(template_mips) {}
  [[nodiscard]] std::string name() const override { return longest_ ? "ljf" : "sjf"; }
  std::optional<DispatchDecision> next(std::span<const QueuedCloudlet> q,
                                       std::span<const VmView> vms, double now) override {
    return longest_ ? ljf(q, vms, template_mips_, now) : sjf(q, vms, template_mips_, now);
  }

 private:
  bool longest_;
  double template_mips_;
};

class OlbPolicy : public DispatchPolicy {
 public:
  explicit OlbPolicy(std::uint64_t seed) : rng_(seed) {}
  [[nodiscard]] std::string name() const override { return "olb"; }
  std::optional<DispatchDecision> next(std::span<const QueuedCloudlet> q,
                                       std::span<const VmView> vms, double now) override {
    return olb(q, vms, rng_, now);
  }

 private:
  Rng rng_;
};

// First pick of the batch only. Dispatched work shows up in the VM backlog, so
// repeated calls walk the same sequence as the full batch.
class MinMinPolicy : public DispatchPolicy {
 public:
  [[nodiscard]] std::string name() const override { return "minmin"; }
  std::optional<DispatchDecision> next(std::span<const QueuedCloudlet> q,
                                       std::span<const VmView> vms, double now) override {
    detail::require_queue(q);
    const auto order = detail::serviceable_by_id(vms);
    if (order.empty()) return std::nullopt;
    std::vector<QueuedCloudlet> left(q.begin(), q.end());
    std::sort(left.begin(), left.end(), detail::fcfs_before);
    const QueuedCloudlet* bt = nullptr;
    const VmView* bv = nullptr;
    double bc = std::numeric_limits<double>::infinity();
    for (const auto& t : left) {
      for (const auto* v : order) {
        const double c = v->backlog / v->mips + t.length / v->mips;
        if (c < bc) {
          bc = c;
          bt = &t;
          bv = v;
        }
      }
    }
    return DispatchDecision{bt->id, bv->id, now};
  }
};

inline std::unique_ptr<DispatchPolicy> make_dispatch_policy(const std::string& name,
                                                            double template_mips,
                                                            std::uint64_t seed) {
  if (name == "fcfs") return std::make_unique<FcfsPolicy>();
  if (name == "timeshared") return std::make_unique<FcfsPolicy>("timeshared");
  if (name == "rr") return std::make_unique<RoundRobinPolicy>(false, template_mips);
  if (name == "wrr") return std::make_unique<RoundRobinPolicy>(true, template_mips);
  if (name == "sjf") return std::make_unique<EstimatePolicy>(false, template_mips);
  if (name == "ljf") return std::make_unique<EstimatePolicy>(true, template_mips);
  if (name == "olb") return std::make_unique<OlbPolicy>(seed);
  if (name == "minmin") return std::make_unique<MinMinPolicy>();
  throw ConfigError("unknown dispatch policy: " + name);
}

}  // namespace alvec
