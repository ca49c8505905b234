#include "torus_scatter/causality_poles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace torus_scatter {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

std::vector<cplx> expand(const PoleSet& s) {
  std::vector<cplx> out;
  for (const Pole& p : s.poles) out.insert(out.end(), static_cast<std::size_t>(p.multiplicity), p.p);
  return out;
}

bool on_imaginary_axis(cplx z) { return std::abs(z.real()) < 1e-10 * std::abs(z); }

}  // namespace

double wigner_derivative_bound(double p, double delta, double R) {
  if (!(p > 0.0)) throw std::invalid_argument("Wigner bound needs p > 0; use the threshold form at p = 0");
  if (!(R >= 0.0)) throw std::invalid_argument("interaction radius must be non-negative");
  return -R + std::sin(2.0 * delta + 2.0 * p * R) / (2.0 * p);
}

double threshold_range_bound_3d(double R, double a) {
  if (a == 0.0 || !std::isfinite(a)) throw std::invalid_argument("threshold bound needs finite non-zero a");
  if (!(R >= 0.0)) throw std::invalid_argument("interaction radius must be non-negative");
  return 2.0 * (R - R * R / a + R * R * R / (3.0 * a * a));
}

double effective_area_bound_2d(double R, double a2) {
  if (!(a2 > 0.0)) throw std::invalid_argument("2D scattering length must be positive");
  if (!(R >= 0.0)) throw std::invalid_argument("interaction radius must be non-negative");
  if (R == 0.0) return 0.0;
  const double l = std::log(R / (2.0 * a2)) + std::numbers::egamma - 0.5;
  return R * R / kPi * (l * l + 0.25);
}

std::string to_string(PhaseChannel c) { return c == PhaseChannel::Phi ? "phi" : "theta"; }

std::string to_string(Edge e) {
  switch (e) {
    case Edge::Right: return "right";
    case Edge::Left: return "left";
    case Edge::Upper: return "upper";
    case Edge::Lower: return "lower";
  }
  return "?";
}

std::string to_string(PoleCase c) {
  switch (c) {
    case PoleCase::ResonancePair: return "resonance_pair";
    case PoleCase::DoubleVirtual: return "double_virtual";
    case PoleCase::TwoVirtual: return "two_virtual";
    case PoleCase::OutOfScope: return "out_of_scope";
  }
  return "?";
}

TangentAudit tangent_vector_audit(const Trajectory& trajectory, double tol) {
  if (trajectory.dimension != 3) throw std::invalid_argument("tangent-vector audit applies to 3D trajectories");
  TangentAudit audit;
  for (const TrajectorySample& s : trajectory.samples) {
    auto check = [&](double x, double dx, PhaseChannel ch) {
      const double bound = std::sin(x) / s.p;
      const double margin = dx - bound;
      const double scaled = margin / std::max({1.0, std::abs(dx), std::abs(bound)});
      audit.worst_scaled_margin = std::min(audit.worst_scaled_margin, scaled);
      if (scaled < -tol || std::isnan(scaled)) audit.violations.push_back({s.p, ch, margin});
    };
    check(s.unwrapped.phi, s.tangent.phi, PhaseChannel::Phi);
    check(s.unwrapped.theta, s.tangent.theta, PhaseChannel::Theta);
  }
  return audit;
}

QuadrantExitAudit quadrant_exit_audit(const Trajectory& trajectory) {
  const auto& s = trajectory.samples;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double jump = std::max(std::abs(s[i].unwrapped.phi - s[i - 1].unwrapped.phi),
                                 std::abs(s[i].unwrapped.theta - s[i - 1].unwrapped.theta));
    if (!(jump < kPi / 4.0)) {
      throw std::invalid_argument("grid too coarse near p = " + std::to_string(s[i].p) +
                                  ": neighbouring phases differ by pi/4 or more; increase the sample count");
    }
  }

  QuadrantExitAudit audit;
  auto scan = [&](std::size_t i, double x0, double x1, bool is_phi) {
    const double k0 = std::floor(x0 / kPi), k1 = std::floor(x1 / kPi);
    if (k0 == k1) return;
    const bool increasing = x1 > x0;
    const double level = (increasing ? k1 : k0) * kPi;
    const double t = (level - x0) / (x1 - x0);
    QuadrantCrossing c;
    c.p = s[i - 1].p + t * (s[i].p - s[i - 1].p);
    c.edge = is_phi ? (increasing ? Edge::Right : Edge::Left) : (increasing ? Edge::Upper : Edge::Lower);
    c.allowed = increasing;
    if (!c.allowed) ++audit.forbidden;
    audit.crossings.push_back(c);
  };
  for (std::size_t i = 1; i < s.size(); ++i) {
    scan(i, s[i - 1].unwrapped.phi, s[i].unwrapped.phi, true);
    scan(i, s[i - 1].unwrapped.theta, s[i].unwrapped.theta, false);
  }
  return audit;
}

PoleSet classify_poles(const std::vector<cplx>& roots) {
  PoleSet set;
  if (roots.size() == 2 && std::abs(roots[0] - roots[1]) <= 1e-8 * std::max(std::abs(roots[0]), std::abs(roots[1]))) {
    set.poles.push_back({0.5 * (roots[0] + roots[1]), 2});
  } else {
    for (cplx r : roots) set.poles.push_back({r, 1});
  }

  set.kind = PoleCase::OutOfScope;
  if (set.poles.size() == 1 && set.poles[0].multiplicity == 2) {
    const cplx z = set.poles[0].p;
    if (on_imaginary_axis(z) && z.imag() < 0.0) set.kind = PoleCase::DoubleVirtual;
  } else if (set.poles.size() == 2) {
    const cplx z0 = set.poles[0].p, z1 = set.poles[1].p;
    const double scale = std::max(std::abs(z0), std::abs(z1));
    if (on_imaginary_axis(z0) && on_imaginary_axis(z1)) {
      if (z0.imag() < 0.0 && z1.imag() < 0.0) set.kind = PoleCase::TwoVirtual;
    } else if (std::abs(z0.real() + z1.real()) <= 1e-10 * scale && std::abs(z0.imag() - z1.imag()) <= 1e-10 * scale) {
      set.kind = PoleCase::ResonancePair;
    }
  }
  return set;
}

PoleSet poles_closed_form(double a, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive");
  if (a == 0.0 || !std::isfinite(a)) throw std::invalid_argument("scattering length must be finite and non-zero");
  const double scale = 2.0 * std::abs(a) * lambda;
  PoleSet set;
  if (lambda > 0.25) {
    const double pr = std::sqrt(4.0 * lambda - 1.0) / scale;
    const double pi = 1.0 / scale;
    set.poles = {{{pr, -pi}, 1}, {{-pr, -pi}, 1}};
    set.kind = PoleCase::ResonancePair;
  } else if (lambda == 0.25) {
    set.poles = {{{0.0, -1.0 / scale}, 2}};
    set.kind = PoleCase::DoubleVirtual;
  } else {
    const double root = std::sqrt(1.0 - 4.0 * lambda);
    set.poles = {{{0.0, -(1.0 + root) / scale}, 1}, {{0.0, -(1.0 - root) / scale}, 1}};
    set.kind = PoleCase::TwoVirtual;
  }
  return set;
}

PoleSet poles_numeric(double a, double r) {
  if (a == 0.0 || !std::isfinite(a) || !std::isfinite(r)) {
    throw std::invalid_argument("pole search needs finite non-zero a and finite r");
  }
  if (r == 0.0) {
    PoleSet set;
    set.poles = {{cplx(0.0, 1.0 / a), 1}};
    set.kind = PoleCase::OutOfScope;
    return set;
  }
  // p^2 + b p + c = 0 with b = -2i/r, c = -2/(a r); the larger-magnitude root
  // comes from q = -(b + sign * sqrt(disc))/2, the other from c/q.
  const cplx b(0.0, -2.0 / r);
  const cplx c(-2.0 / (a * r), 0.0);
  // b^2 - 4c = (4/r^2)(2r/a - 1); written this way the double root at
  // r = a/2 comes out exact.
  const cplx sq = (2.0 / std::abs(r)) * std::sqrt(cplx(2.0 * r / a - 1.0, 0.0));
  const cplx q = -0.5 * (std::real(std::conj(b) * sq) >= 0.0 ? b + sq : b - sq);
  std::vector<cplx> roots;
  if (q == cplx(0.0, 0.0)) {
    roots = {cplx(0.0, 0.0), cplx(0.0, 0.0)};
  } else {
    roots = {q, c / q};
  }
  return classify_poles(roots);
}

CheckResult verify_lower_half(const PoleSet& set) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const Pole& p : set.poles) worst = std::max(worst, p.p.imag());
  return {"poles_lower_half", worst, 0.0, !set.poles.empty() && worst < 0.0};
}

double pole_set_distance(const PoleSet& a, const PoleSet& b) {
  std::vector<cplx> x = expand(a), y = expand(b);
  if (x.size() != y.size()) return std::numeric_limits<double>::infinity();
  auto key = [](cplx z) { return std::pair{z.real(), z.imag()}; };
  std::sort(y.begin(), y.end(), [&](cplx u, cplx v) { return key(u) < key(v); });
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
    best = std::min(best, worst);
  } while (std::next_permutation(y.begin(), y.end(), [&](cplx u, cplx v) { return key(u) < key(v); }));
  return best;
}

}  // namespace torus_scatter
