#pragma once

#include "fbp/grid.hpp"

namespace fbp {

/// u(x) = g0 ln(|x-c|/R) / ln(r_in/R), clamped at 0 outside B_R(c).
struct RadialSolution {
  Point center;
  double r_in = 1.0;
  double R = 1.0;
  double g0 = 1.0;
  double f0 = 1.0;

  double operator()(Point x) const;
  /// |grad u| at radius rho in (r_in, R]; g0 / (rho ln(R/r_in)).
  double slope(double rho) const;
  /// |grad u|^2 on |x - c| = R.
  double flux_squared() const { return slope(R) * slope(R); }
};

/// Root of g0 / (R ln(R/r_in)) = sqrt(f0) by bisection on
/// [r_in (1 + 1e-6), 50 r_in]. Throws SPEC_INVALID on non-positive input and
/// NO_ROOT_IN_BRACKET if the flux at the right end still exceeds sqrt(f0).
RadialSolution radial_solution(double r_in, double g0, double f0, Point center = {});

/// h(x) = g_max ln(|x|/R0) / ln(r/R0), positive part, with R0 the least R > r
/// where g_max^2 / (R^2 ln^2(r/R)) < λ. g_max = 1 is the unit-data barrier.
struct SupersolutionBarrier {
  Point center;
  double r = 1.0;
  double R0 = 1.0;
  double lambda = 1.0;
  double g_max = 1.0;

  double operator()(Point x) const;
};

SupersolutionBarrier supersolution_barrier(double r, double lambda, double g_max = 1.0, Point center = {});

/// r^{α/2} cos((α/2)(θ + π/α)), positive on the sector -2π/α < θ < 0.
/// θ is taken in [-2π/α, 2π - 2π/α) so the whole sector is one branch.
struct SectorHarmonic {
  double alpha = 2.0;

  double eval(double r, double theta) const;
  double operator()(Point p) const;
  /// The function on its sector and 0 elsewhere.
  double positive_part(Point p) const;
};

/// Throws ALPHA_OUT_OF_RANGE for α < 1.
SectorHarmonic sector_harmonic(double alpha);

enum class PlaneKind { SinglePlane, TwoPlanes };

struct SlopeBound {
  double value = 0.0;        // Richardson-extrapolated quotient
  double quotient_s = 0.0;   // quotient at step s
  double quotient_s2 = 0.0;  // quotient at step s/2
  Point x0;
  Point normal;              // inward
};

/// Inward normal derivative of the Poisson extension of the comparison trace
/// at its zero point on the unit circle, by incremental quotients.
///   SinglePlane: trace y2+, x0 = (sqrt(1 - δ^2), -δ).
///   TwoPlanes:   trace (|y2| - δ)+, x0 = (1, 0).
/// Throws DELTA_OUT_OF_RANGE unless 0 < δ < 1/2.
SlopeBound planar_barrier_slope_bound(PlaneKind kind, double delta, double step = 1e-3);

}  // namespace fbp
