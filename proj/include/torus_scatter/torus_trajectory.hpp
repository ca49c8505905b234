#pragma once

// Flat-torus geometry of the phase pair (phi, theta): the R^4 embedding of the
// S operator, momentum grids, sampled trajectories and quadrant bookkeeping.

#include "torus_scatter/ere_models.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace torus_scatter {

/// Maps an angle to its representative in [-pi, pi).
double canonical_angle(double x);

/// Signed distance from x to y on the circle, in (-pi, pi].
double angle_difference(double x, double y);

struct TorusPoint {
  double phi = 0.0;
  double theta = 0.0;

  /// Canonicalizes both coordinates.
  static TorusPoint from(double phi, double theta);
  static TorusPoint from(const PhasePair& p) { return from(p.phi, p.theta); }
};

/// S = (x + i y) 1 + (z + i w) P12.
struct Embedding4 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double w = 0.0;

  double norm() const;
};

Embedding4 embed_r4(double phi, double theta);
inline Embedding4 embed_r4(const TorusPoint& pt) { return embed_r4(pt.phi, pt.theta); }

/// |d embedding|^2 / (1/2 (dphi^2 + dtheta^2)) for a small displacement.
/// Throws std::invalid_argument for zero separation or a step above 1e-3.
double line_element_ratio(const TorusPoint& base, double dphi, double dtheta);

/// Quadrants by the signs of (sin phi, sin theta); TopRight is phi, theta in
/// (0, pi), BottomLeft is phi, theta in (-pi, 0).
enum class Quadrant { TopRight, TopLeft, BottomLeft, BottomRight, Boundary };

std::string to_string(Quadrant q);

/// Boundary when either coordinate is within 1e-12 of a multiple of pi.
Quadrant quadrant(const TorusPoint& pt);

enum class GridSpacing { Log, Linear };

/// `count` momenta from `min` to `max` inclusive. Requires 0 < min < max
/// (min == max allowed for count == 1) and count >= 1.
std::vector<double> momentum_grid(double min, double max, std::size_t count,
                                  GridSpacing spacing = GridSpacing::Log);

/// Log grid symmetric about the inversion fixed point 1/sqrt(scale): for every
/// p the grid also contains 1/(scale p) up to rounding.
std::vector<double> inversion_paired_grid(double scale, double decades, std::size_t count);

struct TrajectorySample {
  double p = 0.0;
  TorusPoint point;
  PhasePair unwrapped;
  PhasePair tangent;  // (dphi/dp, dtheta/dp); NaN where not defined
  Quadrant quadrant = Quadrant::Boundary;
};

struct Trajectory {
  int dimension = 3;
  std::vector<TrajectorySample> samples;
};

/// Samples the model on a strictly increasing positive grid. The canonical
/// points are unwrapped sequentially; if that disagrees with the closed-form
/// continuous branch anywhere (a jump of pi or more between neighbours) the
/// grid is too coarse and std::invalid_argument is thrown.
Trajectory sample_trajectory(const TwoChannelModel& model, const std::vector<double>& p_grid);

/// Closed-form tangent (dphi/dp, dtheta/dp). 3D allows p >= 0, 2D needs p > 0.
PhasePair tangent(const TwoChannelModel& model, double p);

}  // namespace torus_scatter
