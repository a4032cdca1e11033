// Experiment driver: run a config, verify a stored field, or plot a report.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fbp/error.hpp"
#include "fbp/lab.hpp"

namespace {

void summary(const fbp::VerificationReport& r) {
  for (const auto& c : r.checks) std::cout << fbp::to_string(c.verdict) << "  " << c.name << '\n';
  std::cout << r.pass << " pass, " << r.fail << " fail, " << r.finding << " finding\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free-boundary solver and verification battery"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  auto* run = app.add_subcommand("run", "solve the spec of a config and run the battery");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--out", out_dir, "output directory (overrides [output] dir)");

  std::string field_path, spec_path, report_out;
  auto* verify = app.add_subcommand("verify", "run the battery on a stored field");
  verify->add_option("field", field_path, "field CSV")->required();
  verify->add_option("--spec", spec_path, "config holding the spec")->required();
  verify->add_option("--out", report_out, "report path (default: stdout)");

  std::string report_path, kind, plot_out;
  auto* plot = app.add_subcommand("plot", "draw one series of a report as SVG");
  plot->add_option("report", report_path, "report.json")->required();
  plot->add_option("--kind", kind, "J_CURVE, DENSITY, FB_POLYLINE or FIELD_HEATMAP")->required();
  plot->add_option("--out", plot_out, "SVG path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      fbp::ExperimentConfig cfg = fbp::load_config(config_path);
      if (!out_dir.empty()) cfg.output_dir = out_dir;
      const fbp::VerificationReport r = fbp::run_experiment(cfg, std::cerr);
      summary(r);
      return fbp::exit_code(r);
    }
    if (*verify) {
      const fbp::VerificationReport r = fbp::verify_field(field_path, fbp::load_config(spec_path));
      if (report_out.empty()) {
        std::cout << r.dump();
      } else {
        std::ofstream(report_out, std::ios::binary) << r.dump();
        summary(r);
      }
      return fbp::exit_code(r);
    }
    const fbp::PlotKind k = fbp::parse_plot_kind(kind);
    std::ifstream in(report_path);
    if (!in) throw fbp::Error(fbp::ErrorCode::IoFailure, "cannot read " + report_path);
    nlohmann::json report;
    try {
      report = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw fbp::Error(fbp::ErrorCode::IoFailure, report_path + ": " + e.what());
    }
    const std::string svg =
        fbp::plot_report(report, k, std::filesystem::path(report_path).parent_path().string());
    if (plot_out.empty()) {
      std::cout << svg;
    } else {
      std::ofstream(plot_out, std::ios::binary) << svg;
    }
    return 0;
  } catch (const fbp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
