#pragma once

// Effective-range models for the singlet (s = 0) and triplet (s = 1) s-wave
// channels in three and two spatial dimensions.
//
// Units: hbar = M = 1. Lengths are in an arbitrary unit L and momenta in 1/L;
// only the products a p, r p and lambda enter.

#include "torus_scatter/jet.hpp"

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <variant>

namespace torus_scatter {

/// 3D channel: p cot(delta) = -1/a + r p^2 / 2. Shape parameters are zero by
/// construction. `unitarity` marks 1/a = 0; `a` is ignored in that case.
struct Channel3D {
  double a = 0.0;
  double r = 0.0;
  bool unitarity = false;

  static Channel3D at_unitarity(double r = 0.0) { return {0.0, r, true}; }
  bool operator==(const Channel3D&) const = default;
};

/// 2D channel: cot(delta) = (1/pi) log(a2^2 p^2) + sigma2 p^2, with a2 > 0.
struct Channel2D {
  double a2 = 1.0;
  double sigma2 = 0.0;
  bool operator==(const Channel2D&) const = default;
};

struct Channels3D {
  Channel3D singlet;
  Channel3D triplet;
  bool operator==(const Channels3D&) const = default;
};

struct Channels2D {
  Channel2D singlet;
  Channel2D triplet;
  bool operator==(const Channels2D&) const = default;
};

/// Momentum-inversion families: T1 scattering-length approximation,
/// T2 range-correlated models, T3 the causal subset of T2.
enum class SymmetryTable { T1, T2, T3 };

std::string to_string(SymmetryTable table);
SymmetryTable symmetry_table_from_string(const std::string& name);

struct Family {
  SymmetryTable table = SymmetryTable::T1;
  int row = 1;          // 1-based, as printed in the tables
  double lambda = 1.0;  // ignored for T1
  bool operator==(const Family&) const = default;

  /// lambda actually used in the inversion p -> 1/(lambda |a0 a1| p).
  double inversion_lambda() const { return table == SymmetryTable::T1 ? 1.0 : lambda; }
};

struct TwoChannelModel {
  std::variant<Channels3D, Channels2D> channels;
  std::optional<Family> family;

  static TwoChannelModel three_d(Channel3D singlet, Channel3D triplet) {
    return {Channels3D{singlet, triplet}, std::nullopt};
  }
  static TwoChannelModel two_d(Channel2D singlet, Channel2D triplet) {
    return {Channels2D{singlet, triplet}, std::nullopt};
  }

  int dimension() const { return std::holds_alternative<Channels3D>(channels) ? 3 : 2; }
  const Channels3D& three() const;  // throws std::invalid_argument if 2D
  const Channels2D& two() const;    // throws std::invalid_argument if 3D

  bool operator==(const TwoChannelModel&) const = default;
};

enum class SpinChannel { Singlet, Triplet };

/// Phases on the continuous branch: phi(p), theta(p) are continuous in p and
/// start from the threshold value (0 in 3D, 2 pi in 2D).
struct PhasePair {
  double phi = 0.0;
  double theta = 0.0;
};

struct PhaseEvaluation {
  PhasePair unwrapped;
  /// True where the momentum-dependent scattering length a_s(p) has a pole
  /// (p^2 = 2/(a_s r_s)); the phase there is the continuity limit.
  bool singular_phi = false;
  bool singular_theta = false;
  /// 2D threshold p = 0: logarithmic singularity, returned as the limit.
  bool threshold = false;
};

// --- 3D ---------------------------------------------------------------

/// delta_s(p) on the continuous branch: -atan2(a p, 1 - a r p^2 / 2), or
/// atan2(1, r p / 2) at unitarity. Works for double and Jet.
template <class T>
T phase_shift_3d(const Channel3D& c, const T& p) {
  if (c.unitarity) return atan2(T{1.0}, 0.5 * c.r * p);
  return -atan2(c.a * p, 1.0 - 0.5 * c.a * c.r * p * p);
}

/// True when p sits on the zero of 1 - a r p^2 / 2 (relative 1e-12).
bool at_scattering_length_pole(const Channel3D& c, double p);

/// phi = 2 delta_0, theta = 2 delta_1 for a 3D model; p >= 0.
PhaseEvaluation phase_shifts_3d(const TwoChannelModel& model, double p);

/// S_s = (1 - i a_s(p) p) / (1 + i a_s(p) p) = e^{2 i delta_s}.
std::complex<double> s_element(const TwoChannelModel& model, SpinChannel channel, double p);

/// a_s(p) = a_s / (1 - a_s r_s p^2 / 2). Infinite at the pole.
double momentum_dependent_scattering_length(const Channel3D& c, double p);

// --- 2D ---------------------------------------------------------------

/// delta_s(p) = arccot((1/pi) log(a2^2 p^2) + sigma2 p^2), arccot in (0, pi).
template <class T>
T phase_shift_2d(const Channel2D& c, const T& p) {
  constexpr double pi = 3.14159265358979323846;
  const T x = log(c.a2 * c.a2 * p * p) / pi + c.sigma2 * p * p;
  return 0.5 * pi - atan(x);
}

/// phi = 2 delta_0, theta = 2 delta_1 in (0, 2 pi) for a 2D model; p > 0,
/// p = 0 gives the threshold limit 2 pi (flagged).
PhaseEvaluation phase_shifts_2d(const TwoChannelModel& model, double p);

// --- both -------------------------------------------------------------

/// Dispatches on the model dimension.
PhaseEvaluation phase_shifts(const TwoChannelModel& model, double p);

struct PhaseJets {
  Jet phi;
  Jet theta;
};

/// Phases with derivatives in p up to third order.
PhaseJets phase_jets(const TwoChannelModel& model, double p);

/// (d phi/dp, d theta/dp) in closed form.
PhasePair phase_tangent(const TwoChannelModel& model, double p);

// --- symmetric families ----------------------------------------------

/// Builds a model from a family row: T1 (r = 0), T2 (r = -+2 eta/a
/// with eta = lambda |a0 a1|), T3 (r = -+2 a lambda with the row's sign
/// conditions). Throws std::invalid_argument for a bad row, lambda <= 0, zero
/// scattering lengths, or a violated sign condition.
TwoChannelModel make_symmetric_model(SymmetryTable table, int row, double a0, double a1,
                                     double lambda);

int row_count(SymmetryTable table);

/// Ranges the T2 row would assign, independent of sign conditions.
std::pair<double, double> table2_ranges(int row, double a0, double a1, double lambda);

}  // namespace torus_scatter
