#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fbp/grid.hpp"
#include "fbp/problem.hpp"

namespace fbp {

struct Segment {
  Point a;
  Point b;
};

/// Marching squares on the sign of `values`: a node is inside when its value
/// is < 0. Crossings are linearly interpolated along cell edges; saddle cells
/// are split by the sign of the cell average.
std::vector<Segment> contour_segments(const Grid2D& grid, std::span<const double> values);

double total_length(const std::vector<Segment>& segments);

/// Gradient at a free-boundary point p from a least-squares quadratic
/// u ≈ a dx + b dy + c dx^2 + d dx dy + e dy^2 (so u(p) = 0), fitted to the
/// given samples. Falls back to the linear model with fewer than 7 samples.
std::optional<Point> fit_gradient(Point p, std::span<const Point> where, std::span<const double> values, double h);

/// Gradient from a linear model through p fitted to positive-side samples.
std::optional<Point> fit_gradient_linear(Point p, std::span<const Point> where, std::span<const double> values);

/// Free-boundary points of a nodal field. A crossing sits on every grid edge
/// joining a positive node outside D to a zero node; its position is the
/// linear extrapolation of the two positive nodes behind it (midpoint when
/// that fails). Normal and flux come from fit_gradient.
std::vector<FreeBoundaryPoint> extract_free_boundary(const ScalarField& u, std::span<const std::uint8_t> positive,
                                                     std::span<const std::uint8_t> in_D);

/// Flux with the quadratic fit at given crossing points (used by the solver,
/// which knows the crossings from its level set).
std::vector<FreeBoundaryPoint> boundary_fluxes(const ScalarField& u, std::span<const std::uint8_t> positive,
                                               std::span<const std::uint8_t> in_D, std::span<const Point> crossings);

/// One-sided flux: linear fit through p over positive nodes outside D within
/// 2h. Used for residual reporting, independent of the solver's estimator.
std::optional<double> one_sided_flux(const ScalarField& u, std::span<const std::uint8_t> positive,
                                     std::span<const std::uint8_t> in_D, Point p);

/// Node mask of D on the grid.
std::vector<std::uint8_t> disk_mask(const Grid2D& grid, const Disk& D);

/// Wraps an externally produced field: positivity at θ_pos, D nodes tagged
/// DIRICHLET, free boundary extracted. converged is true, method "field".
Solution solution_from_field(ScalarField field, const ProblemSpec& spec);

}  // namespace fbp
