#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "fbp/config.hpp"
#include "fbp/verify.hpp"

namespace fbp {

enum class PlotKind { JCurve, Density, FbPolyline, FieldHeatmap };

/// "J_CURVE", "DENSITY", "FB_POLYLINE", "FIELD_HEATMAP"; else INVALID_USAGE.
PlotKind parse_plot_kind(const std::string& text);
std::string to_string(PlotKind kind);

/// 0 when every check passes, 2 when any FAIL or FINDING.
int exit_code(const VerificationReport& report);

/// Solves the spec at every h (or samples the mock field), runs the battery
/// and writes into cfg.output_dir:
///   solution_<k>.csv, fb_<k>.csv   k = 0 for the coarsest grid
///   report.json                    artifacts list the files below
///   fb_polyline.svg, field_heatmap.svg, and j_curve.svg / density.svg when
///   those checks ran
/// Grids are solved in parallel, at most FBP_LAB_THREADS at a time (default:
/// hardware threads). Progress goes to `log`; the report has no timings.
VerificationReport run_experiment(const ExperimentConfig& cfg, std::ostream& log);

/// Battery on a stored field (single grid) against the config's spec.
VerificationReport verify_field(const std::string& field_csv, const ExperimentConfig& cfg);

/// SVG for one series of a report. Field and boundary plots read the
/// artifacts relative to `report_dir`. Throws SERIES_MISSING when the report
/// does not hold the data.
std::string plot_report(const nlohmann::json& report, PlotKind kind, const std::string& report_dir);

/// Free-boundary points as "x,y,normal_x,normal_y,flux" lines with a header.
void save_boundary_csv(const std::string& path, const Solution& sol);
std::vector<Point> load_boundary_csv(const std::string& path);

}  // namespace fbp
