#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fbp/problem.hpp"

namespace fbp {

struct SolverParams {
  double fbc_tol = 1e-4;       // stop when max |flux^2 - f| falls below this
  double move_tol = 1e-3;      // or when the largest move is below move_tol * h
  double move_fraction = 1.0;  // largest move per iteration, in cells
  int max_iterations = 300;
  double smooth_scale = 0.3;   // longest smoothing length of the velocity
  double smooth_gain = 0.6;    // gain per smoothing length
  double local_gain = 0.2;     // unsmoothed part, in units of h
  double tol = 0.0;            // harmonic solve tolerance; 0 means 1e-8 * max g
  int max_sweeps = 200000;
  bool coarse_start = false;   // start from the solution at spacing 2h
  double coarse_h = 1.0 / 48;  // ...while 2h stays at most this coarse
  int energy_max_iterations = 4000;
  int energy_start_cells = 3;  // D dilated by this many cells to start the oracle
};

/// Trial free-boundary iteration. The trial set is {φ < 0} outside D for a
/// level set φ on the nodes; both ∂D and {φ = 0} enter the harmonic solve as
/// cut arms. Each iteration moves the front along the normal by a smoothed
/// multiple of flux/sqrt(f) - 1, clamped to move_fraction cells, then
/// re-initialises φ as a signed distance. φ never drops below |x| - R0, so
/// the set stays inside the barrier support. Returns converged = false with
/// the last iterate when max_iterations runs out. Throws SPEC_INVALID.
Solution solve_largest_subsolution(const ProblemSpec& spec, const Grid2D& grid, const SolverParams& params);

/// Independent oracle on node masks: minimises
///   sum over grid edges of (u_i - u_j)^2 + h^2 sum of f over positive nodes
/// with u harmonic on the set, by accepting layer moves that lower the energy.
Solution ac_energy_minimize(const ProblemSpec& spec, const Grid2D& grid, const SolverParams& params);

/// The energy minimised by ac_energy_minimize, evaluated for any field (D
/// nodes excluded from the f term, positivity from sol.positive).
double discrete_energy(const Solution& sol, const ProblemSpec& spec);

struct ResidualSummary {
  std::vector<double> residuals;  // flux^2 - f per free-boundary point
  double max_abs = 0.0;
  double mean = 0.0;
  double l2 = 0.0;
  std::size_t skipped = 0;        // points without a usable one-sided fit
};

/// |grad u|^2 - f at each free-boundary point, the gradient taken one-sided
/// from the positive nodes. Throws EMPTY_FREE_BOUNDARY.
ResidualSummary fbc_residual(const Solution& sol, const ProblemSpec& spec);

struct ComparisonVerdict {
  bool holds = true;
  std::size_t worst = 0;
  double excess = 0.0;  // max of v - w
  Point where;
};

/// v <= w + tol at every node. Throws GRID_MISMATCH.
ComparisonVerdict comparison_check(const ScalarField& v, const ScalarField& w, double tol = 1e-9);

/// Barrier of the spec sampled to the grid, D nodes set to g_max.
ScalarField barrier_field(const ProblemSpec& spec, const Grid2D& grid);

/// Exact radial profile sampled to the grid, D nodes set to g0.
ScalarField radial_field(const RadialSolution& w, const Disk& D, const Grid2D& grid);

struct ViscosityFinding {
  Point p;
  double slope = 0.0;     // extrapolated least supporting slope
  double required = 0.0; // sqrt(f(p))
};

struct ViscosityReport {
  std::size_t points = 0;         // free-boundary points examined
  std::size_t tested = 0;         // those with an exterior tangent ball
  std::vector<ViscosityFinding> violations;
  std::size_t subharmonic_nodes = 0;
  std::size_t subharmonic_violations = 0;
  double min_laplacian = 0.0;
  double tol = 0.0;
  bool pass() const { return violations.empty() && subharmonic_violations == 0; }
};

/// Slope test at free-boundary points that admit an exterior tangent ball:
/// α(ρ) = max of u / <x - x0, ν> over positive nodes in the 45° cone around
/// ν with |x - x0| <= ρ, for ρ in {4h, 8h, 16h}, extrapolated linearly to
/// ρ = 0. A point fails when α < sqrt(f) - tol. Also checks Δ_h u >= -tol at
/// positive nodes whose stencil avoids D.
ViscosityReport check_viscosity_subsolution(const Solution& sol, const ProblemSpec& spec, double tol,
                                            std::size_t max_points = 0);

}  // namespace fbp
