#pragma once

// Causality: Wigner bounds, tangent-vector and quadrant-exit audits of
// zero-range trajectories, and S-matrix poles in the complex momentum plane.

#include "torus_scatter/check.hpp"
#include "torus_scatter/torus_trajectory.hpp"

#include <complex>
#include <string>
#include <vector>

namespace torus_scatter {

/// -R + sin(2 delta + 2 p R) / (2 p). p > 0, R >= 0.
double wigner_derivative_bound(double p, double delta, double R);

/// 2 [R - R^2/a + R^3/(3 a^2)], the largest effective range allowed by
/// the threshold Wigner bound. Rejects a = 0.
double threshold_range_bound_3d(double R, double a);

/// (R^2/pi) {[log(R/(2 a2)) + gamma - 1/2]^2 + 1/4}; 0 at R = 0.
double effective_area_bound_2d(double R, double a2);

enum class PhaseChannel { Phi, Theta };
std::string to_string(PhaseChannel c);

struct TangentViolation {
  double p = 0.0;
  PhaseChannel channel = PhaseChannel::Phi;
  double margin = 0.0;  // dphi/dp - sin(phi)/p
};

struct TangentAudit {
  std::vector<TangentViolation> violations;
  /// Most negative margin divided by max(1, |dphi/dp|, |sin(phi)/p|).
  double worst_scaled_margin = 0.0;
};

/// Checks dphi/dp >= sin(phi)/p and dtheta/dp >= sin(theta)/p at every
/// sample. A sample violates when the margin is below
/// -tol * max(1, |dphi/dp|, |sin(phi)/p|). 3D trajectories only.
TangentAudit tangent_vector_audit(const Trajectory& trajectory, double tol = 1e-10);

enum class Edge { Right, Left, Upper, Lower };
std::string to_string(Edge e);

struct QuadrantCrossing {
  double p = 0.0;  // linear interpolation between the bracketing samples
  Edge edge = Edge::Right;
  bool allowed = true;  // only upper and right exits are causal
};

struct QuadrantExitAudit {
  std::vector<QuadrantCrossing> crossings;
  std::size_t forbidden = 0;
};

/// Detects crossings of phi or theta through a multiple of pi on the
/// unwrapped samples. Increasing phi leaves through the right edge,
/// increasing theta through the upper edge; decreasing crossings are
/// left/lower exits and are flagged. Throws std::invalid_argument if any
/// neighbouring samples differ by pi/4 or more.
QuadrantExitAudit quadrant_exit_audit(const Trajectory& trajectory);

// --- poles ----------------------------------------------------------------

enum class PoleCase { ResonancePair, DoubleVirtual, TwoVirtual, OutOfScope };
std::string to_string(PoleCase c);

struct Pole {
  std::complex<double> p;
  int multiplicity = 1;
};

struct PoleSet {
  std::vector<Pole> poles;
  PoleCase kind = PoleCase::OutOfScope;
};

/// Poles of the lambda family r = 2 a lambda: lambda > 1/4 gives
/// +-p_R - i p_I, lambda = 1/4 a double pole -i/(2|a| lambda), lambda < 1/4
/// two virtual states -i p_+-. Rejects lambda <= 0 and a = 0.
PoleSet poles_closed_form(double a, double lambda);

/// Roots of p^2 - (2i/r) p - 2/(a r), the denominator of S for
/// p cot(delta) = -1/a + r p^2/2. r = 0 gives the single pole i/a, marked
/// out of scope.
PoleSet poles_numeric(double a, double r);

/// Merges roots closer than 1e-8 relative into a double root and classifies.
PoleSet classify_poles(const std::vector<std::complex<double>>& roots);

/// Passes iff every pole has Im p < 0; max_deviation is the largest Im p.
CheckResult verify_lower_half(const PoleSet& set);

/// Largest distance between matched poles (multiplicities expanded); infinite
/// if the multisets differ in size.
double pole_set_distance(const PoleSet& a, const PoleSet& b);

}  // namespace torus_scatter
