#pragma once

// Forecasting helpers: weighted moving average of response times and an
// axis-aligned ellipse model of the VM-vs-cloudlet phase scatter.

#include <alvec/error.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace alvec {

// Sliding window of observations; index 0 is the most recent.
class WmaWindow {
 public:
  explicit WmaWindow(std::size_t n) : n_(n) {
    if (n_ < 1) throw InvalidParams("WMA window length must be at least 1");
  }

  WmaWindow(std::size_t n, std::vector<double> most_recent_first) : WmaWindow(n) {
    for (auto it = most_recent_first.rbegin(); it != most_recent_first.rend(); ++it) push(*it);
  }

  void push(double observation) {
    history_.push_front(observation);
    if (history_.size() > n_) history_.pop_back();
  }

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] bool ready() const noexcept { return history_.size() >= n_; }
  [[nodiscard]] const std::deque<double>& history() const noexcept { return history_; }

 private:
  std::size_t n_;
  std::deque<double> history_;
};

// Weights n, n-1, ..., 1 on the most recent observations. Empty until the
// window holds n observations.
inline std::optional<double> wma_predict(const WmaWindow& w) {
  if (!w.ready()) return std::nullopt;
  const std::size_t n = w.n();
  double num = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += static_cast<double>(n - i) * w.history()[i];
  }
  const double den = static_cast<double>(n) * static_cast<double>(n + 1) / 2.0;
  return num / den;
}

struct ScatterPoint {
  double cloudlets{0.0};  // x
  double vms{0.0};        // y
};

struct EllipseModel {
  double h{0.0};  // center, cloudlet axis
  double k{0.0};  // center, VM axis
  double a{1.0};  // semi-axis along cloudlets
  double b{1.0};  // semi-axis along VMs

  [[nodiscard]] double normalized_radius(double x, double y) const {
    const double u = (x - h) / a;
    const double v = (y - k) / b;
    return std::sqrt(u * u + v * v);
  }
};

enum class Branch { Upper, Lower };

// Mean center; the axis-aligned half-extents are scaled together until the
// outermost point sits on the boundary.
inline EllipseModel fit_ellipse(const std::vector<ScatterPoint>& points) {
  if (points.size() < 5) throw FitError("ellipse fit needs at least 5 points");

  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : points) {
    if (!std::isfinite(p.cloudlets) || !std::isfinite(p.vms)) {
      throw FitError("ellipse fit input is not finite");
    }
    mx += p.cloudlets;
    my += p.vms;
  }
  mx /= n;
  my /= n;

  double sxx = 0.0, syy = 0.0, sxy = 0.0, ex = 0.0, ey = 0.0;
  for (const auto& p : points) {
    const double dx = p.cloudlets - mx;
    const double dy = p.vms - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
    ex = std::max(ex, std::abs(dx));
    ey = std::max(ey, std::abs(dy));
  }
  if (ex == 0.0 || ey == 0.0) throw FitError("ellipse fit input has zero extent");
  if (sxx * syy - sxy * sxy <= 1e-12 * sxx * syy) throw FitError("ellipse fit input is collinear");

  EllipseModel m{mx, my, ex, ey};
  double s = 0.0;
  for (const auto& p : points) s = std::max(s, m.normalized_radius(p.cloudlets, p.vms));
  m.a *= s;
  m.b *= s;
  return m;
}

inline double predict_vm(const EllipseModel& m, double cloudlets, Branch branch = Branch::Lower) {
  const double u = (cloudlets - m.h) / m.a;
  if (!(std::abs(u) <= 1.0)) {
    throw OutOfRange("cloudlet count outside the ellipse's horizontal range");
  }
  const double half = m.b * std::sqrt(std::max(0.0, 1.0 - u * u));
  return branch == Branch::Upper ? m.k + half : m.k - half;
}

// VM count for a fractional prediction (rounded toward zero).
inline long predicted_vm_count(double vms) { return static_cast<long>(std::trunc(vms)); }

inline std::vector<EllipseModel> concentric_family(const EllipseModel& m,
                                                   const std::vector<double>& scales) {
  std::vector<EllipseModel> out;
  out.reserve(scales.size());
  for (double s : scales) {
    if (!(s > 0.0 && s <= 1.0)) throw InvalidParams("ellipse scale must lie in (0, 1]");
    out.push_back({m.h, m.k, s * m.a, s * m.b});
  }
  return out;
}

inline void to_json(nlohmann::json& j, const EllipseModel& m) {
  j = nlohmann::json{{"h", m.h}, {"k", m.k}, {"a", m.a}, {"b", m.b}};
}

inline void from_json(const nlohmann::json& j, EllipseModel& m) {
  j.at("h").get_to(m.h);
  j.at("k").get_to(m.k);
  j.at("a").get_to(m.a);
  j.at("b").get_to(m.b);
  if (!(m.a > 0.0) || !(m.b > 0.0)) throw InvalidParams("ellipse axes must be positive");
}

// Reads "cloudlets,vms" rows. Blank lines, '#' comments and a non-numeric
// header row are skipped.
inline std::vector<ScatterPoint> read_scatter_csv(std::istream& in) {
  std::vector<ScatterPoint> pts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError("scatter row without comma: " + line);
    try {
      const double x = std::stod(line.substr(0, comma));
      const double y = std::stod(line.substr(comma + 1));
      pts.push_back({x, y});
    } catch (const std::invalid_argument&) {
      if (pts.empty()) continue;  // header
      throw ConfigError("malformed scatter row: " + line);
    }
  }
  return pts;
}

}  // namespace alvec
