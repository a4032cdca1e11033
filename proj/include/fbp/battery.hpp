#pragma once

#include <string>
#include <vector>

#include "fbp/solver.hpp"
#include "fbp/verify.hpp"

namespace fbp {

struct BatteryOptions {
  std::vector<std::string> checks;  // empty runs every check
  bool radial_oracle = false;       // FB radius against the radial root
  std::size_t sample_points = 16;
  double fbc_factor = 1.5;          // residual drop per refinement
  double viscosity_tol = 0.1;       // times sqrt(λ)
  double stability = 0.15;
  double kappa_factor = 0.5;
  double mass_ratio = 4.0;
  std::vector<double> mass_radii{0.4, 0.2, 0.1, 0.05, 0.025};
  std::size_t green_points = 5;
  double green_radius = 0.2;
  double green_factor = 5.0;        // residual <= green_factor * h
  double density_c = 0.1;
  double density_r_max = 0.3;
  double window = 0.3;              // normalised window radius
  double inscribed_min = 0.05;      // inscribed zero ball / window radius
  double audit_radius = 0.6;
  std::vector<double> exclusion_eps{0.5, 0.25, 0.125};
  std::size_t exclusion_points = 4;
  double oracle_h = 0.0;            // 0 skips the energy oracle
  double oracle_C = 2.0;            // area <= oracle_C * h * perimeter
  double j_h = 1.0 / 128;           // grid of the J(R) pairs on [-1, 1]^2
  double j_r_min = 0.1;
  double j_r_max = 0.9;
  int j_radii = 20;
};

/// Names of all checks, in report order.
const std::vector<std::string>& battery_checks();

/// Runs the selected checks on solutions of one spec at decreasing h.
/// Checks that need the finest grid use sweep.back().
std::vector<CheckRecord> run_battery(const ProblemSpec& spec, const SolutionSweep& sweep, const BatteryOptions& opt,
                                     const SolverParams& params);

/// Length of the midpoint marching-squares polygon around the positive nodes.
double positivity_perimeter(const Solution& sol);

}  // namespace fbp
