#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fbp/grid.hpp"

namespace fbp {

/// Harmonic extension into the unit disk of a boundary trace given at the M
/// angles θ_m = 2πm/M, using the kernel (1-|x|^2) / (2π|x-y|^2) and the
/// trapezoid rule. Throws POINT_NOT_INTERIOR when |x| >= 1.
double poisson_disk_eval(std::span<const double> trace, Point x);

/// Same, sampling trace(θ) at M angles first.
double poisson_disk_eval(const std::function<double(double)>& trace, int samples, Point x);

/// G(y) = ln(|y - x0| / r) / 2π on B_r(x0).
struct GreenDisk {
  Point center;
  double r = 1.0;
};

struct GreenEval {
  double value = 0.0;
  /// Outward radial derivative at M equispaced points of the circle, starting
  /// at angle 0. Constant 1/(2πr) for the centred pole.
  std::vector<double> flux;
};

/// Throws POLE_EVALUATION at y = x0. `samples` is the number of circle points.
GreenEval green_value_and_flux(const GreenDisk& g, Point y, int samples = 64);

/// ∬ ln|y| over [ax, bx] x [ay, by] in closed form. Finite for any rectangle,
/// including ones containing the origin.
double log_integral_rect(double ax, double bx, double ay, double by);

/// | u(x0) - ∮ u G_ν ds - ∬ G Δ_h u dx | over B_r(x0).
/// Circle: trapezoid at M = max(64, ⌈2πr/h⌉) bilinear samples. Area: one
/// midpoint cell per node strictly inside the ball, skipping nodes without a
/// Laplacian. The cell holding x0 is integrated exactly. Throws
/// BALL_OUTSIDE_GRID.
double green_identity_residual(const ScalarField& u, Point x0, double r);

}  // namespace fbp
