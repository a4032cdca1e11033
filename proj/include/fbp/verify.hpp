#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "fbp/grid.hpp"
#include "fbp/problem.hpp"

namespace fbp {

enum class Verdict { Pass, Fail, Finding };
std::string to_string(Verdict v);

/// One check of the battery. `statement` says in plain words what property
/// is being measured.
struct CheckRecord {
  std::string name;
  std::string statement;
  Verdict verdict = Verdict::Pass;
  nlohmann::json measured = nlohmann::json::object();
  nlohmann::json tolerance = nlohmann::json::object();
  nlohmann::json sweep = nlohmann::json::object();
  std::string detail;
};

using SolutionSweep = std::vector<const Solution*>;  // coarse to fine

/// Free-boundary points nearest in angle (about `center`) to the n angles
/// 2π(k + 1/2)/n. Deterministic; duplicates removed.
std::vector<Point> pick_boundary_points(const Solution& sol, Point center, std::size_t n);

/// C1 = max u(x)/dist(x, free boundary) over positive nodes outside D,
/// C2 = max |grad u| (central differences) over positive nodes outside D.
/// PASS when both change by at most `stability` between consecutive grids.
/// Throws EMPTY_POSITIVITY_SET.
CheckRecord lipschitz_report(const SolutionSweep& sweep, const ProblemSpec& spec, double stability = 0.15);

struct NondegeneracyParams {
  std::size_t points = 16;
  double r_max = 0.2;
  double r_min_cells = 8.0;   // dyadic radii r_max / 2^k down to this many cells
  double kappa_factor = 0.5;  // κ_min = kappa_factor * sqrt(λ)
  double stability = 0.15;
};

/// sup_{B_r(x0)} u / r at each point and radius. Throws RADIUS_TOO_SMALL for
/// r < 4h. With per_component, the sup runs over the positive component
/// holding the positive node nearest to x0.
std::vector<double> sup_ratios(const Solution& sol, Point x0, std::span<const double> radii, bool per_component);

/// κ̂ = min of sup u / r, globally and per component. PASS when κ̂ ≥ κ_min on
/// every grid (both variants) and κ̂ changes by at most `stability`.
CheckRecord nondegeneracy_report(const SolutionSweep& sweep, const ProblemSpec& spec,
                                 const NondegeneracyParams& params = {});

/// mass(r) = sum over nodes of B_r(x0) of Δ_h u h^2, with the Laplacian at
/// positive nodes clipped below at 0. Nodes flagged in `exclude` and nodes on
/// the grid edge are skipped. Throws BALL_OUTSIDE_GRID.
std::vector<double> laplacian_mass(const ScalarField& u, Point x0, std::span<const double> radii,
                                   std::span<const std::uint8_t> exclude = {});

/// mass(r)/r over the radii; PASS when max/min ≤ band_ratio.
CheckRecord laplacian_mass_report(const Solution& sol, const ProblemSpec& spec, Point x0,
                                  std::span<const double> radii, double band_ratio = 4.0);

/// Exact area of the intersection of a disk and an axis-aligned rectangle.
double disk_rect_area(Point c, double r, const Rect& rect);

struct MonotonicitySample {
  double R = 0.0;
  double J = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double energy1 = 0.0;
  double energy2 = 0.0;
};

struct MonotonicityResult {
  std::vector<MonotonicitySample> samples;
  double tol_J = 0.0;  // 1e-3 * J(R_max)
  bool monotone = true;
  bool strictly_increasing = true;
};

/// J(R) = R^-4 * E1 * E2 with E_i the cell-centred gradient energy of u_i
/// over B_R(x_c), each cell weighted by its exact area inside the disk.
/// Arc fractions t_i = 2 * share of `samples` circle points with u_i > 0.
/// Throws OVERLAPPING_SUPPORTS when a node is positive for both fields and
/// its 3x3 neighbourhood has no zero of either; CENTER_NOT_ON_BOTH_BOUNDARIES
/// when some field has no zero node within 1.5h of x_c; GRID_MISMATCH.
MonotonicityResult monotonicity_J(const ScalarField& u1, const ScalarField& u2, Point xc, std::span<const double> radii,
                                  int samples = 720);

CheckRecord monotonicity_record(const std::string& name, const MonotonicityResult& r, bool require_strict);

struct Rational {
  long long num = 0;
  long long den = 1;
};

struct ArcEigenRow {
  Rational alpha;
  Rational bound;        // 1/(2α) + 1/(2(1-α)), reduced
  double bound_value = 0.0;
  double sqrt_mu = 0.0;  // square root of the first discrete eigenvalue
  double exact = 0.0;    // 1/(2α)
  double rel_error = 0.0;
  int M = 0;             // interior points on the arc
};

/// Exact table plus the first Dirichlet eigenvalue of -d²/dθ² on an arc of
/// length 2πα with M interior points (Sturm bisection on the tridiagonal
/// matrix). Throws ALPHA_OUT_OF_RANGE unless 0 < α < 1.
std::vector<ArcEigenRow> arc_eigenvalue_bound(std::span<const Rational> alphas, int M = 400);

struct ExclusionLevel {
  double eps = 0.0;
  std::vector<std::size_t> counts;  // per solution in the sweep
  std::vector<double> trace_r;      // angular traces on the finest grid when 2 components touch
  std::vector<double> t1;
  std::vector<double> t2;
};

struct ExclusionProbe {
  Point xc;
  double rho = 0.0;
  std::vector<ExclusionLevel> levels;
  bool finding = false;  // 2 or more components at some ε on every grid
};

/// Components of Ω ∩ (B_ρ \ B_ερ)(x_c) that reach ∂B_ερ (a node within h of
/// it), per ε and per grid. Throws WINDOW_OUTSIDE_GRID.
ExclusionProbe two_component_exclusion_probe(const SolutionSweep& sweep, Point xc, std::span<const double> eps,
                                             double rho);

CheckRecord exclusion_record(const std::string& name, const std::vector<ExclusionProbe>& probes);

struct Environment {
  std::vector<double> h;
  std::string spec_hash;
  nlohmann::json solver = nlohmann::json::object();
};

struct VerificationReport {
  std::vector<CheckRecord> checks;  // sorted by name
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t finding = 0;
  Environment env;
  nlohmann::json artifacts = nlohmann::json::object();  // file names relative to the report

  nlohmann::json to_json() const;
  std::string dump() const;  // 2-space indent, trailing newline
};

/// Throws INVALID_USAGE on an empty list.
VerificationReport assemble_report(std::vector<CheckRecord> records, Environment env);

/// FNV-1a (64 bit, hex) over the spec's defining data.
std::string spec_hash(const ProblemSpec& spec);

}  // namespace fbp
