#pragma once

// Geometric action on the flat torus: potentials V(phi, theta), the lapse N(p)
// and inaffinity kappa = N'/N, residuals of the trajectory equations
//   x''^a - kappa x'^a + (1/2) N^2 g^{ab} d_b V = 0,  g = diag(1/2, 1/2),
// and integration of the affine (N = 1) equations of motion.

#include "torus_scatter/check.hpp"
#include "torus_scatter/ere_models.hpp"
#include "torus_scatter/torus_trajectory.hpp"

#include <optional>
#include <string>
#include <vector>

namespace torus_scatter {

/// V = A tan^2(s (phi + eps theta) + chi).
struct GeometricPotential {
  double amplitude = 0.0;
  int epsilon = 1;
  double scale = 0.5;
  double phase = 0.0;
  double c1 = 1.0;

  template <class T>
  T argument(const T& phi, const T& theta) const {
    return scale * (phi + static_cast<double>(epsilon) * theta) + phase;
  }

  template <class T>
  T value(const T& phi, const T& theta) const {
    const T t = tan(argument(phi, theta));
    return amplitude * t * t;
  }

  /// (dV/dphi, dV/dtheta).
  template <class T>
  std::pair<T, T> gradient(const T& phi, const T& theta) const {
    const T arg = argument(phi, theta);
    const T t = tan(arg);
    const T c = cos(arg);
    const T d = (2.0 * amplitude * scale) * t / (c * c);
    return {d, static_cast<double>(epsilon) * d};
  }

  /// |cos(argument)| below tol.
  bool singular_at(double phi, double theta, double tol = 1e-6) const;
};

/// Requires finite non-zero a0, a1 and c1 != 0.
GeometricPotential potential_3d(double a0, double a1, double c1 = 1.0);

/// Half the amplitude of potential_3d with scale 1/4.
GeometricPotential potential_lam14(double a0, double a1, double c1 = 1.0);

/// Checked form: the model must be a T2/T3 row 5 or 6 family with
/// lambda = 1/4 whose ranges are r_s = a_s / 2 (the double-pole models).
GeometricPotential potential_lam14(const TwoChannelModel& model, double c1 = 1.0);

/// A = -pi^2 / (4 log^2(a0/a1) c1^2), eps = +1, chi = pi/2. Rejects a0 = a1.
GeometricPotential potential_2d(double a2_0, double a2_1, double c1 = 1.0);

/// N = prefactor (c1/p) (sin(k phi) - eps sin(k theta)).
struct LapseSpec {
  double prefactor = 1.0;
  int epsilon = -1;
  double angle_scale = 1.0;
  double c1 = 1.0;

  template <class T>
  T value(const T& phi, const T& theta, const T& p) const {
    return (prefactor * c1) * (sin(angle_scale * phi) - static_cast<double>(epsilon) * sin(angle_scale * theta)) /
           p;
  }
};

LapseSpec lapse_spec_3d(double a0, double a1, double c1 = 1.0);
LapseSpec lapse_spec_lam14(double a0, double a1, double c1 = 1.0);

/// N(p) along a 3D model with the scattering-length lapse. p > 0.
double lapse_3d(const TwoChannelModel& model, double p, double c1 = 1.0);

/// N(p) for a lambda = 1/4 double-pole model.
double lapse_lam14(const TwoChannelModel& model, double p, double c1 = 1.0);

/// Evaluates a lapse along a model, p > 0.
double lapse(const TwoChannelModel& model, const LapseSpec& spec, double p);

/// kappa = N'/N with the analytic derivative. nullopt where |N| < 1e-10.
std::optional<double> inaffinity(const TwoChannelModel& model, const LapseSpec& spec, double p);

/// A potential/lapse pair that solves the trajectory equations for a model.
struct SolvableSystem {
  GeometricPotential potential;
  LapseSpec lapse;
  std::string kind;  // "scattering-length" or "lambda-1/4"
};

/// 3D models with r0 = r1 = 0 get potential_3d/lapse_3d, the lambda = 1/4
/// double-pole models get potential_lam14/lapse_lam14. Anything else throws
/// std::invalid_argument (no closed-form potential is available).
SolvableSystem solvable_system(const TwoChannelModel& model, double c1 = 1.0);

struct ResidualSample {
  double p = 0.0;
  double res_phi = 0.0;
  double res_theta = 0.0;
};

struct ResidualReport {
  std::vector<ResidualSample> samples;  // non-singular points only
  std::vector<double> excluded_p;       // |cos(arg)| < 1e-6 or |N| < 1e-10
  double max_norm = 0.0;
};

/// Residual of both trajectory equations along a 3D model, with analytic
/// p-derivatives. Singular grid points are excluded and listed.
ResidualReport eom_residual(const TwoChannelModel& model, const GeometricPotential& potential,
                            const LapseSpec& lapse, const std::vector<double>& p_grid);

struct OverdeterminationSample {
  double p = 0.0;
  double kappa = 0.0;
  double lapse_squared = 0.0;
  double deviation = 0.0;  // p |M'/(2M) - kappa| / (1 + p |kappa|)
};

struct OverdeterminationReport {
  std::vector<OverdeterminationSample> samples;
  std::vector<double> excluded_p;
  double max_deviation = 0.0;
  double min_lapse_squared = 0.0;
};

/// 2D: the two trajectory equations are solved pointwise for kappa and
/// M = N^2 with potential_2d; consistency requires kappa = M'/(2M) and M > 0.
OverdeterminationReport overdetermination_2d(const TwoChannelModel& model, double c1,
                                             const std::vector<double>& p_grid);

// --- affine integration -------------------------------------------------

struct AffineState {
  double phi = 0.0;
  double theta = 0.0;
  double dphi = 0.0;    // d phi / d tau
  double dtheta = 0.0;  // d theta / d tau
};

struct AffineSample {
  double tau = 0.0;
  AffineState state;
};

struct AffineCurve {
  std::vector<AffineSample> samples;
  bool truncated = false;
  std::string diagnostic;
};

struct AffineOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
  std::size_t output_points = 2000;
  double singular_tol = 1e-6;  // stop when |cos(arg)| falls below
};

/// Integrates x''^a = -dV/dx^a (N = 1, g^{ab} = 2 I) from tau = 0 to
/// tau_end (either sign) with Boost.Odeint's dense-output Dormand-Prince
/// stepper. Stops early with a diagnostic near a potential singularity.
AffineCurve integrate_affine(const GeometricPotential& potential, const AffineState& init,
                             double tau_end, const AffineOptions& options = {});

/// (phi'^2 + theta'^2)/2 + V, conserved by integrate_affine.
double first_integral(const GeometricPotential& potential, const AffineState& s);

/// Point on a model trajectory at momentum p with velocity x'(p)/N(p).
/// p = 0 is allowed for 3D scattering-length models (limit taken).
AffineState affine_initial_state(const TwoChannelModel& model, const LapseSpec& lapse, double p);

/// tau(p1) - tau(p0) = integral of N dp (adaptive quadrature; p1 may be
/// infinite).
double affine_parameter_span(const TwoChannelModel& model, const LapseSpec& lapse, double p0,
                             double p1);

/// Symmetric Hausdorff distance between two polylines in the (phi, theta)
/// plane, using point-to-segment distances.
double hausdorff_distance(const std::vector<PhasePair>& a, const std::vector<PhasePair>& b);

// --- Galilean relabeling --------------------------------------------------

/// p -> Omega p on every sample; the (phi, theta) point set is untouched and
/// tangents scale by 1/Omega. Rejects Omega < 1.
Trajectory galilean_rescale(const Trajectory& trajectory, double omega);

/// The model whose trajectory at label q is the original one at q / Omega:
/// all lengths divided by Omega (areas by Omega^2).
TwoChannelModel galilean_relabeled_model(const TwoChannelModel& model, double omega);

}  // namespace torus_scatter
