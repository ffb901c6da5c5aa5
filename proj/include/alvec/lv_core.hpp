#pragma once

// Lotka-Volterra model of VM supply (prey, P) and job demand (predator, Q):
//
//   dP/dt = alpha*P - beta*P*Q
//   dQ/dt = delta*P*Q - gamma*Q

#include <alvec/error.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace alvec {

struct LVParams {
  double alpha{1.0};  // VM upscaling rate
  double beta{1.0};   // VM allocation (predation) rate
  double gamma{1.0};  // job completion rate
  double delta{1.0};  // job arrival coupling

  [[nodiscard]] bool valid() const noexcept {
    auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
    return ok(alpha) && ok(beta) && ok(gamma) && ok(delta);
  }

  void validate() const {
    if (!valid()) {
      throw InvalidParams("LV coefficients must be finite and strictly positive");
    }
  }

  friend bool operator==(const LVParams&, const LVParams&) = default;
};

struct PopulationState {
  double p{0.0};  // VM count
  double q{0.0};  // job count
  double t{0.0};  // model time

  [[nodiscard]] bool finite() const noexcept {
    return std::isfinite(p) && std::isfinite(q) && std::isfinite(t);
  }

  friend bool operator==(const PopulationState&, const PopulationState&) = default;
};

struct Rates {
  double dp{0.0};
  double dq{0.0};
};

struct Trajectory {
  std::vector<PopulationState> samples;
  LVParams params;
  double sampling_step{0.1};
};

enum class Region {
  EquilibriumOrigin,
  EquilibriumInterior,
  A,  // P below gamma/delta, Q below alpha/beta: dP > 0, dQ < 0
  B,  // P below, Q above: dP < 0, dQ < 0
  C,  // P above, Q below: dP > 0, dQ > 0
  D,  // P above, Q above: dP < 0, dQ > 0
  OnPNullcline,
  OnQNullcline,
};

enum class Scenario { PreyIncreasing, Stable, PreyDecreasing };

inline std::string_view to_string(Region r) {
  switch (r) {
    case Region::EquilibriumOrigin: return "EquilibriumOrigin";
    case Region::EquilibriumInterior: return "EquilibriumInterior";
    case Region::A: return "A";
    case Region::B: return "B";
    case Region::C: return "C";
    case Region::D: return "D";
    case Region::OnPNullcline: return "OnPNullcline";
    case Region::OnQNullcline: return "OnQNullcline";
  }
  return "?";
}

inline std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::PreyIncreasing: return "PreyIncreasing";
    case Scenario::Stable: return "Stable";
    case Scenario::PreyDecreasing: return "PreyDecreasing";
  }
  return "?";
}

namespace detail {

inline void require_state(const PopulationState& s) {
  if (!s.finite()) throw InvalidState("population state is not finite");
  if (s.p < 0.0 || s.q < 0.0) throw InvalidState("population state is negative");
}

}  // namespace detail

// Unchecked vector field; the solver's inner loop calls this directly.
inline Rates vector_field(double p, double q, const LVParams& k) noexcept {
  return {k.alpha * p - k.beta * p * q, k.delta * p * q - k.gamma * q};
}

inline Rates derivative(const PopulationState& s, const LVParams& k) {
  if (!s.finite()) throw InvalidState("population state is not finite");
  return vector_field(s.p, s.q, k);
}

inline std::vector<PopulationState> equilibria(const LVParams& k) {
  k.validate();
  return {{0.0, 0.0, 0.0}, {k.gamma / k.delta, k.alpha / k.beta, 0.0}};
}

// Quadrant of the phase plane relative to the two nullclines P = gamma/delta
// and Q = alpha/beta. The axes themselves are invariant lines of the system
// and fall into the quadrant of their side.
inline Region classify_region(const PopulationState& s, const LVParams& k) {
  detail::require_state(s);
  k.validate();
  if (s.p == 0.0 && s.q == 0.0) return Region::EquilibriumOrigin;

  const double p_star = k.gamma / k.delta;
  const double q_star = k.alpha / k.beta;
  if (s.p == p_star && s.q == q_star) return Region::EquilibriumInterior;
  if (s.q == q_star) return Region::OnPNullcline;
  if (s.p == p_star) return Region::OnQNullcline;

  if (s.p < p_star) return s.q < q_star ? Region::A : Region::B;
  return s.q < q_star ? Region::C : Region::D;
}

inline constexpr double kStableRelTol = 1e-9;

// Compares gamma*Q (pressure to grow VMs) against alpha*P.
inline Scenario scenario_condition(const PopulationState& s, const LVParams& k) {
  const double grow = k.gamma * s.q;
  const double shrink = k.alpha * s.p;
  const double scale = std::max(std::abs(grow), std::abs(shrink));
  if (std::abs(grow - shrink) <= kStableRelTol * scale) return Scenario::Stable;
  return grow > shrink ? Scenario::PreyIncreasing : Scenario::PreyDecreasing;
}

// Conserved along every orbit with p, q > 0.
inline double first_integral(const PopulationState& s, const LVParams& k) {
  if (!(s.p > 0.0) || !(s.q > 0.0)) {
    throw DomainError("first integral needs p > 0 and q > 0");
  }
  return k.delta * s.p - k.gamma * std::log(s.p) + k.beta * s.q - k.alpha * std::log(s.q);
}

// Largest relative deviation of the first integral from its value at the
// first sample. Returns 0 for trajectories that touch an axis.
inline double first_integral_drift(const Trajectory& traj) {
  if (traj.samples.empty()) return 0.0;
  for (const auto& s : traj.samples) {
    if (!(s.p > 0.0) || !(s.q > 0.0)) return 0.0;
  }
  const double ref = first_integral(traj.samples.front(), traj.params);
  double worst = 0.0;
  for (const auto& s : traj.samples) {
    const double v = first_integral(s, traj.params);
    worst = std::max(worst, std::abs(v - ref) / std::max(1.0, std::abs(ref)));
  }
  return worst;
}

}  // namespace alvec
