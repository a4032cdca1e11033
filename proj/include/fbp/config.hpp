#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fbp/battery.hpp"
#include "fbp/problem.hpp"
#include "fbp/solver.hpp"

namespace fbp {

/// Field used in place of the solver (planted defects, external checks).
struct MockField {
  std::string kind;  // "radial" or "radial_island"
  Point island_center;
  double island_radius = 0.0;
};

struct ExperimentConfig {
  ProblemSpec spec;
  std::vector<double> h;  // strictly decreasing
  SolverParams solver;
  BatteryOptions battery;
  std::optional<MockField> mock;
  std::string output_dir = "out";
};

/// Line-oriented "key = value" with [sections]; '#' starts a comment. See
/// docs/config.md. Throws CONFIG_INVALID naming the field ("spec.f", ...).
ExperimentConfig parse_config(const std::string& text);

/// Reads the file, then parse_config. Throws IO_FAILURE.
ExperimentConfig load_config(const std::string& path);

/// Samples the mock on a grid covering the spec rectangle.
ScalarField mock_field(const MockField& mock, const ProblemSpec& spec, double h);

}  // namespace fbp
