#pragma once

// Adaptive Runge-Kutta-Fehlberg 4(5) integration of the LV system.

#include <alvec/error.hpp>
#include <alvec/lv_core.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace alvec {

struct SolverConfig {
  double rel_tol{1e-8};
  double abs_tol{1e-10};
  double h_init{1e-3};
  double h_min{1e-12};
  double h_max{0.1};
  std::int64_t max_steps{10'000'000};
  // Off: every sample time is hit by a step endpoint. On: steps run freely
  // and samples come from cubic Hermite interpolation of accepted steps.
  bool hermite_dense{false};

  void validate() const {
    auto in_unit = [](double v) { return std::isfinite(v) && v > 0.0 && v < 1.0; };
    if (!in_unit(rel_tol) || !in_unit(abs_tol)) {
      throw InvalidParams("solver tolerances must lie in (0, 1)");
    }
    if (!(h_min > 0.0) || !(h_min <= h_init) || !(h_init <= h_max) || !(h_max <= 1.0)) {
      throw InvalidParams("solver steps must satisfy 0 < h_min <= h_init <= h_max <= 1");
    }
    if (max_steps < 1) throw InvalidParams("max_steps must be positive");
  }
};

struct StepResult {
  PopulationState state;
  double error_estimate{0.0};
  double h_used{0.0};
  double h_next{0.0};
  bool accepted{false};
};

namespace detail {

// Fehlberg's coefficients.
struct Fehlberg {
  static constexpr double c2 = 1.0 / 4.0, c3 = 3.0 / 8.0, c4 = 12.0 / 13.0, c5 = 1.0, c6 = 1.0 / 2.0;

  static constexpr double a21 = 1.0 / 4.0;
  static constexpr double a31 = 3.0 / 32.0, a32 = 9.0 / 32.0;
  static constexpr double a41 = 1932.0 / 2197.0, a42 = -7200.0 / 2197.0, a43 = 7296.0 / 2197.0;
  static constexpr double a51 = 439.0 / 216.0, a52 = -8.0, a53 = 3680.0 / 513.0,
                          a54 = -845.0 / 4104.0;
  static constexpr double a61 = -8.0 / 27.0, a62 = 2.0, a63 = -3544.0 / 2565.0,
                          a64 = 1859.0 / 4104.0, a65 = -11.0 / 40.0;

  // 4th-order weights (propagated solution).
  static constexpr double b1 = 25.0 / 216.0, b3 = 1408.0 / 2565.0, b4 = 2197.0 / 4104.0,
                          b5 = -1.0 / 5.0;
  // 5th-order weights (error reference).
  static constexpr double e1 = 16.0 / 135.0, e3 = 6656.0 / 12825.0, e4 = 28561.0 / 56430.0,
                          e5 = -9.0 / 50.0, e6 = 2.0 / 55.0;
};

struct RawStep {
  double p4, q4;  // propagated
  double dp, dq;  // |y5 - y4|
};

inline RawStep fehlberg_raw(double p, double q, double h, const LVParams& k) noexcept {
  using F = Fehlberg;
  const Rates k1 = vector_field(p, q, k);
  const Rates k2 = vector_field(p + h * F::a21 * k1.dp, q + h * F::a21 * k1.dq, k);
  const Rates k3 = vector_field(p + h * (F::a31 * k1.dp + F::a32 * k2.dp),
                                q + h * (F::a31 * k1.dq + F::a32 * k2.dq), k);
  const Rates k4 = vector_field(p + h * (F::a41 * k1.dp + F::a42 * k2.dp + F::a43 * k3.dp),
                                q + h * (F::a41 * k1.dq + F::a42 * k2.dq + F::a43 * k3.dq), k);
  const Rates k5 = vector_field(
      p + h * (F::a51 * k1.dp + F::a52 * k2.dp + F::a53 * k3.dp + F::a54 * k4.dp),
      q + h * (F::a51 * k1.dq + F::a52 * k2.dq + F::a53 * k3.dq + F::a54 * k4.dq), k);
  const Rates k6 = vector_field(
      p + h * (F::a61 * k1.dp + F::a62 * k2.dp + F::a63 * k3.dp + F::a64 * k4.dp +
               F::a65 * k5.dp),
      q + h * (F::a61 * k1.dq + F::a62 * k2.dq + F::a63 * k3.dq + F::a64 * k4.dq +
               F::a65 * k5.dq),
      k);

  RawStep out{};
  out.p4 = p + h * (F::b1 * k1.dp + F::b3 * k3.dp + F::b4 * k4.dp + F::b5 * k5.dp);
  out.q4 = q + h * (F::b1 * k1.dq + F::b3 * k3.dq + F::b4 * k4.dq + F::b5 * k5.dq);
  const double p5 =
      p + h * (F::e1 * k1.dp + F::e3 * k3.dp + F::e4 * k4.dp + F::e5 * k5.dp + F::e6 * k6.dp);
  const double q5 =
      q + h * (F::e1 * k1.dq + F::e3 * k3.dq + F::e4 * k4.dq + F::e5 * k5.dq + F::e6 * k6.dq);
  out.dp = std::abs(p5 - out.p4);
  out.dq = std::abs(q5 - out.q4);
  return out;
}

inline double step_factor(double err) {
  if (err <= 0.0) return 5.0;
  return std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
}

// One step without the h range precondition, so integration can clip the
// last step of an interval below h_min.
inline StepResult fehlberg_step(const PopulationState& s, const LVParams& k, double h,
                                const SolverConfig& cfg) {
  const RawStep raw = fehlberg_raw(s.p, s.q, h, k);

  const double scale_p = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(s.p), std::abs(raw.p4));
  const double scale_q = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(s.q), std::abs(raw.q4));
  const double err = std::max(raw.dp / scale_p, raw.dq / scale_q);

  StepResult r;
  r.h_used = h;
  r.error_estimate = err;
  if (!std::isfinite(err) || !std::isfinite(raw.p4) || !std::isfinite(raw.q4)) {
    r.state = s;
    r.accepted = false;
    r.h_next = h * 0.2;
  } else {
    r.accepted = err <= 1.0;
    r.h_next = h * step_factor(err);
    r.state = r.accepted ? PopulationState{raw.p4, raw.q4, s.t + h} : s;
  }

  if (r.accepted && (r.state.p < 0.0 || r.state.q < 0.0)) {
    const double undershoot = std::max(-r.state.p, -r.state.q);
    if (undershoot < cfg.abs_tol) {
      r.state.p = std::max(r.state.p, 0.0);
      r.state.q = std::max(r.state.q, 0.0);
    } else {
      r.state = s;
      r.accepted = false;
      r.h_next = h * 0.5;
    }
  }

  if (!r.accepted && h <= cfg.h_min) {
    throw StepSizeUnderflow("RKF45 step rejected at the minimum step size");
  }
  r.h_next = std::clamp(r.h_next, cfg.h_min, cfg.h_max);
  return r;
}

inline void require_progress(std::int64_t steps, const SolverConfig& cfg) {
  if (steps > cfg.max_steps) throw NonConvergence("RKF45 exceeded max_steps");
}

inline void require_finite(const PopulationState& s) {
  if (!s.finite()) throw Divergence("population became non-finite during integration");
}

// Cubic Hermite interpolation between two accepted step endpoints.
inline PopulationState hermite(const PopulationState& a, const PopulationState& b,
                               const LVParams& k, double t) {
  const double h = b.t - a.t;
  const double s = (t - a.t) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  const Rates fa = vector_field(a.p, a.q, k);
  const Rates fb = vector_field(b.p, b.q, k);
  return {h00 * a.p + h10 * h * fa.dp + h01 * b.p + h11 * h * fb.dp,
          h00 * a.q + h10 * h * fa.dq + h01 * b.q + h11 * h * fb.dq, t};
}

}  // namespace detail

inline StepResult rkf45_step(const PopulationState& state, const LVParams& params, double h,
                             const SolverConfig& cfg) {
  cfg.validate();
  params.validate();
  detail::require_state(state);
  if (!(h >= cfg.h_min && h <= cfg.h_max)) {
    throw InvalidParams("step size outside [h_min, h_max]");
  }
  return detail::fehlberg_step(state, params, h, cfg);
}

inline Trajectory integrate(const PopulationState& start, const LVParams& params, double t_end,
                            double sample_step, const SolverConfig& cfg = {}) {
  cfg.validate();
  params.validate();
  detail::require_state(start);
  if (!(t_end > start.t)) throw InvalidParams("t_end must exceed the start time");
  if (!(sample_step > 0.0)) throw InvalidParams("sample_step must be positive");

  const double t0 = start.t;
  const auto n_samples =
      static_cast<std::int64_t>(std::floor((t_end - t0) / sample_step + 1e-9)) + 1;
  auto sample_time = [&](std::int64_t i) { return t0 + static_cast<double>(i) * sample_step; };

  Trajectory traj;
  traj.params = params;
  traj.sampling_step = sample_step;
  traj.samples.reserve(static_cast<std::size_t>(n_samples));
  traj.samples.push_back(start);

  PopulationState cur = start;
  double h = cfg.h_init;
  std::int64_t steps = 0;

  if (!cfg.hermite_dense) {
    for (std::int64_t i = 1; i < n_samples; ++i) {
      const double target = sample_time(i);
      while (cur.t < target) {
        const double remaining = target - cur.t;
        const bool clipped = h >= remaining;
        const double hs = clipped ? remaining : h;
        const StepResult r = detail::fehlberg_step(cur, params, hs, cfg);
        detail::require_progress(++steps, cfg);
        if (!r.accepted) {
          h = std::min(r.h_next, hs);
          continue;
        }
        detail::require_finite(r.state);
        cur = r.state;
        if (clipped) {
          cur.t = target;
        } else {
          h = r.h_next;
        }
      }
      traj.samples.push_back(cur);
    }
    return traj;
  }

  const double t_last = sample_time(n_samples - 1);
  std::int64_t next = 1;
  while (next < n_samples) {
    const double remaining = t_last - cur.t;
    const bool clipped = h >= remaining;
    const double hs = clipped ? remaining : h;
    const StepResult r = detail::fehlberg_step(cur, params, hs, cfg);
    detail::require_progress(++steps, cfg);
    if (!r.accepted) {
      h = std::min(r.h_next, hs);
      continue;
    }
    detail::require_finite(r.state);
    PopulationState nxt = r.state;
    if (clipped) nxt.t = t_last;
    while (next < n_samples && sample_time(next) <= nxt.t) {
      const double ts = sample_time(next);
      traj.samples.push_back(ts == nxt.t ? nxt : detail::hermite(cur, nxt, params, ts));
      ++next;
    }
    cur = nxt;
    h = r.h_next;
  }
  return traj;
}

// Classical fixed-step RK4 propagation using the Fehlberg 4th-order weights.
inline PopulationState integrate_fixed(const PopulationState& start, const LVParams& params,
                                       double t_end, double h) {
  params.validate();
  detail::require_state(start);
  if (!(h > 0.0) || !(t_end > start.t)) throw InvalidParams("bad fixed-step interval");
  const auto n = static_cast<std::int64_t>(std::llround((t_end - start.t) / h));
  PopulationState cur = start;
  for (std::int64_t i = 0; i < n; ++i) {
    const detail::RawStep raw = detail::fehlberg_raw(cur.p, cur.q, h, params);
    cur = {raw.p4, raw.q4, start.t + static_cast<double>(i + 1) * h};
    detail::require_finite(cur);
  }
  return cur;
}

struct ConvergenceReport {
  double max_deviation{0.0};
  double at_time{0.0};
  std::size_t samples_compared{0};
};

// Integrates at the given tolerance and at one tenth of it and reports the
// worst component-wise disagreement at shared sample times.
inline ConvergenceReport convergence_check(const PopulationState& start, const LVParams& params,
                                           double t_end, const SolverConfig& cfg,
                                           double sample_step = 0.1) {
  SolverConfig tight = cfg;
  tight.rel_tol = cfg.rel_tol / 10.0;
  tight.abs_tol = cfg.abs_tol / 10.0;
  const Trajectory coarse = integrate(start, params, t_end, sample_step, cfg);
  const Trajectory fine = integrate(start, params, t_end, sample_step, tight);

  ConvergenceReport rep;
  const std::size_t n = std::min(coarse.samples.size(), fine.samples.size());
  rep.samples_compared = n;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::max(std::abs(coarse.samples[i].p - fine.samples[i].p),
                              std::abs(coarse.samples[i].q - fine.samples[i].q));
    if (d > rep.max_deviation) {
      rep.max_deviation = d;
      rep.at_time = coarse.samples[i].t;
    }
  }
  return rep;
}

// CSV with columns t,P,Q at full double precision. Lines in `preamble` are
// emitted first, each prefixed with "# ".
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                                 const std::vector<std::string>& preamble = {}) {
  for (const auto& line : preamble) os << "# " << line << '\n';
  os << "t,P,Q\n";
  char buf[96];
  for (const auto& s : traj.samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.t, s.p, s.q);
    os << buf;
  }
}

}  // namespace alvec
