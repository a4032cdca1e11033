#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fbp/barriers.hpp"
#include "fbp/grid.hpp"

namespace fbp {

struct Disk {
  Point center;
  double radius = 1.0;

  bool contains(Point p) const { return distance(p, center) <= radius; }
  Point project(Point p) const;
};

/// Data of the free-boundary problem: harmonic in {u > 0} minus D, u = g on
/// the boundary of D, |grad u|^2 = f on the free boundary, λ <= f <= Λ.
struct ProblemSpec {
  Disk D;
  std::function<double(Point)> g;
  std::function<double(Point)> f;
  double lambda = 1.0;
  double Lambda = 1.0;
  Rect rect;
  /// Source text of g and f when they came from a config; used for hashing.
  std::string g_text;
  std::string f_text;
};

/// Throws SPEC_INVALID when: λ or Λ is not positive or λ > Λ; f leaves
/// [λ, Λ] on a dense sample of the rectangle; g is negative on ∂D; D is not
/// strictly inside the rectangle; 0 is not in D.
void validate_spec(const ProblemSpec& spec, int samples_per_side = 201);

/// Largest sampled value of g on ∂D (0 for identically zero data).
double g_max(const ProblemSpec& spec, int samples = 720);

/// Comparison ceiling for the spec: barrier around the smallest ball centred
/// at the origin that contains D, with λ and g_max.
SupersolutionBarrier spec_barrier(const ProblemSpec& spec);

/// Benchmark data: D = B_1(0), g = 1, f = f0, square [-half, half]^2.
ProblemSpec radial_spec(double f0, double half = 2.5);

/// f = 2 + 0.5 sin(4 atan2(y, x)), λ = 1.5, Λ = 2.5.
ProblemSpec modulated_spec(double half = 2.5);

struct FreeBoundaryPoint {
  Point p;
  Point normal;  // inward, unit
  double flux = 0.0;
};

struct IterationRecord {
  int iteration = 0;
  std::size_t added = 0;
  std::size_t removed = 0;
  double max_mismatch = 0.0;  // max |flux^2 - f| by the solver's estimator
  double max_move = 0.0;      // largest normal displacement applied
  double energy = 0.0;        // energy oracle only
  int inner_sweeps = 0;
  bool inside_envelope = true;
};

struct Solution {
  ScalarField u;
  std::vector<std::uint8_t> positive;  // u > θ_pos, D included
  std::vector<FreeBoundaryPoint> boundary;
  std::vector<IterationRecord> log;
  bool converged = false;
  double max_mismatch = 0.0;
  std::string method;

  explicit Solution(ScalarField field) : u(std::move(field)) {}
};

/// θ_pos = 1e-12 max g.
double positivity_threshold(const ProblemSpec& spec);

}  // namespace fbp
