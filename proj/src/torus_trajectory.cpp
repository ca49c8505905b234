#include "torus_scatter/torus_trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace torus_scatter {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool near_multiple_of_pi(double x) {
  const double k = std::round(x / kPi);
  return std::abs(x - k * kPi) <= 1e-12;
}

}  // namespace

double canonical_angle(double x) {
  double y = std::fmod(x + kPi, kTwoPi);
  if (y < 0.0) y += kTwoPi;
  y -= kPi;
  // fmod can land exactly on +pi after the shift.
  if (y >= kPi) y -= kTwoPi;
  return y;
}

double angle_difference(double x, double y) {
  double d = std::remainder(x - y, kTwoPi);
  if (d <= -kPi) d += kTwoPi;
  return d;
}

TorusPoint TorusPoint::from(double phi, double theta) {
  return {canonical_angle(phi), canonical_angle(theta)};
}

double Embedding4::norm() const { return std::sqrt(x * x + y * y + z * z + w * w); }

Embedding4 embed_r4(double phi, double theta) {
  const double cp = std::cos(phi), sp = std::sin(phi);
  const double ct = std::cos(theta), st = std::sin(theta);
  return {0.5 * (cp + ct), 0.5 * (sp + st), 0.5 * (-cp + ct), 0.5 * (-sp + st)};
}

double line_element_ratio(const TorusPoint& base, double dphi, double dtheta) {
  if (dphi == 0.0 && dtheta == 0.0) throw std::invalid_argument("zero separation");
  if (std::abs(dphi) > 1e-3 || std::abs(dtheta) > 1e-3) {
    throw std::invalid_argument("separation must be at most 1e-3 per coordinate");
  }
  // Symmetric difference so the ratio is accurate to O(step^2).
  const Embedding4 hi = embed_r4(base.phi + 0.5 * dphi, base.theta + 0.5 * dtheta);
  const Embedding4 lo = embed_r4(base.phi - 0.5 * dphi, base.theta - 0.5 * dtheta);
  const double dx = hi.x - lo.x, dy = hi.y - lo.y, dz = hi.z - lo.z, dw = hi.w - lo.w;
  return (dx * dx + dy * dy + dz * dz + dw * dw) / (0.5 * (dphi * dphi + dtheta * dtheta));
}

std::string to_string(Quadrant q) {
  switch (q) {
    case Quadrant::TopRight: return "top-right";
    case Quadrant::TopLeft: return "top-left";
    case Quadrant::BottomLeft: return "bottom-left";
    case Quadrant::BottomRight: return "bottom-right";
    case Quadrant::Boundary: return "boundary";
  }
  return "?";
}

Quadrant quadrant(const TorusPoint& pt) {
  if (near_multiple_of_pi(pt.phi) || near_multiple_of_pi(pt.theta)) return Quadrant::Boundary;
  const bool up = std::sin(pt.theta) > 0.0;
  const bool right = std::sin(pt.phi) > 0.0;
  if (up) return right ? Quadrant::TopRight : Quadrant::TopLeft;
  return right ? Quadrant::BottomRight : Quadrant::BottomLeft;
}

std::vector<double> momentum_grid(double min, double max, std::size_t count, GridSpacing spacing) {
  if (count == 0) throw std::invalid_argument("grid count must be at least 1");
  if (!(min > 0.0) || !std::isfinite(max) || max < min || (count > 1 && !(max > min))) {
    throw std::invalid_argument("grid needs 0 < min < max");
  }
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = min;
    return grid;
  }
  const double n = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / n;
    grid[i] = spacing == GridSpacing::Log ? min * std::pow(max / min, t) : min + (max - min) * t;
  }
  grid.front() = min;
  grid.back() = max;
  return grid;
}

std::vector<double> inversion_paired_grid(double scale, double decades, std::size_t count) {
  if (!(scale > 0.0) || !(decades > 0.0) || count < 2) {
    throw std::invalid_argument("paired grid needs scale > 0, decades > 0, count >= 2");
  }
  const double center = 1.0 / std::sqrt(scale);
  std::vector<double> grid(count);
  const double n = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = -1.0 + 2.0 * static_cast<double>(i) / n;
    grid[i] = center * std::pow(10.0, 0.5 * decades * t);
  }
  return grid;
}

PhasePair tangent(const TwoChannelModel& model, double p) { return phase_tangent(model, p); }

Trajectory sample_trajectory(const TwoChannelModel& model, const std::vector<double>& p_grid) {
  if (p_grid.empty()) throw std::invalid_argument("empty momentum grid");
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    if (!(p_grid[i] > 0.0) || !std::isfinite(p_grid[i])) {
      throw std::invalid_argument("momentum grid must be positive and finite");
    }
    if (i > 0 && !(p_grid[i] > p_grid[i - 1])) {
      throw std::invalid_argument("momentum grid must be strictly increasing");
    }
  }

  Trajectory traj;
  traj.dimension = model.dimension();
  traj.samples.reserve(p_grid.size());

  PhasePair running{};
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    const double p = p_grid[i];
    const PhaseEvaluation ev = phase_shifts(model, p);
    TrajectorySample s;
    s.p = p;
    s.point = TorusPoint::from(ev.unwrapped);
    s.quadrant = quadrant(s.point);
    s.tangent = phase_tangent(model, p);

    // Sequential unwrap from the canonical values; the first sample is
    // anchored to the closed-form branch.
    if (i == 0) {
      running = ev.unwrapped;
    } else {
      running.phi += angle_difference(s.point.phi, running.phi);
      running.theta += angle_difference(s.point.theta, running.theta);
    }
    const double slip = std::max(std::abs(running.phi - ev.unwrapped.phi),
                                 std::abs(running.theta - ev.unwrapped.theta));
    if (slip > 1.0) {
      throw std::invalid_argument(
          "momentum grid too coarse to unwrap the phases near p = " + std::to_string(p) +
          " (a phase moves by pi or more between neighbouring samples); refine the grid");
    }
    s.unwrapped = ev.unwrapped;
    traj.samples.push_back(s);
  }
  return traj;
}

}  // namespace torus_scatter
