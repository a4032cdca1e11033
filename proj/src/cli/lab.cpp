#include "fbp/lab.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "fbp/error.hpp"
#include "fbp/field_io.hpp"
#include "fbp/free_boundary.hpp"
#include "fbp/svg.hpp"

namespace fbp {

namespace fs = std::filesystem;

namespace {

nlohmann::json solver_json(const SolverParams& p, bool mock) {
  return {{"method", mock ? "mock" : "level_set"},
          {"fbc_tol", p.fbc_tol},
          {"move_tol", p.move_tol},
          {"move_fraction", p.move_fraction},
          {"max_iterations", p.max_iterations},
          {"smooth_scale", p.smooth_scale},
          {"smooth_gain", p.smooth_gain},
          {"local_gain", p.local_gain},
          {"tol", p.tol},
          {"max_sweeps", p.max_sweeps},
          {"coarse_start", p.coarse_start},
          {"coarse_h", p.coarse_h}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoFailure, "write failed: " + path.string());
}

unsigned thread_cap() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FBP_LAB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) n = static_cast<unsigned>(v);
  }
  return n;
}

std::vector<Solution> solve_all(const ExperimentConfig& cfg, std::ostream& log) {
  const std::size_t n = cfg.h.size();
  std::vector<std::optional<Solution>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::vector<double> seconds(n, 0.0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      const auto t0 = std::chrono::steady_clock::now();
      try {
        if (cfg.mock) {
          slots[k].emplace(solution_from_field(mock_field(*cfg.mock, cfg.spec, cfg.h[k]), cfg.spec));
        } else {
          slots[k].emplace(solve_largest_subsolution(cfg.spec, make_grid(cfg.spec.rect, cfg.h[k]), cfg.solver));
        }
      } catch (...) {
        errors[k] = std::current_exception();
      }
      seconds[k] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  const unsigned threads = std::min<unsigned>(thread_cap(), static_cast<unsigned>(n));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::vector<Solution> out;
  for (std::size_t k = 0; k < n; ++k) {
    if (errors[k]) std::rethrow_exception(errors[k]);
    log << "h = " << format_double(cfg.h[k]) << ": " << slots[k]->method << ", "
        << (slots[k]->converged ? "converged" : "not converged") << ", " << slots[k]->boundary.size()
        << " boundary points, " << seconds[k] << " s\n";
    out.push_back(std::move(*slots[k]));
  }
  return out;
}

const nlohmann::json* find_check(const nlohmann::json& report, const std::string& name) {
  if (!report.contains("checks")) return nullptr;
  for (const auto& c : report["checks"]) {
    if (c.value("name", "") == name) return &c;
  }
  return nullptr;
}

[[noreturn]] void missing(const std::string& what) { throw Error(ErrorCode::SeriesMissing, what); }

std::string artifact(const nlohmann::json& report, const std::string& key, const std::string& dir) {
  if (!report.contains("artifacts") || !report["artifacts"].contains(key) || report["artifacts"][key].empty()) {
    missing("report has no " + key + " artifact");
  }
  const fs::path path = fs::path(dir) / report["artifacts"][key].back().get<std::string>();
  if (!fs::exists(path)) missing(path.string() + " does not exist");
  return path.string();
}

}  // namespace

PlotKind parse_plot_kind(const std::string& text) {
  if (text == "J_CURVE") return PlotKind::JCurve;
  if (text == "DENSITY") return PlotKind::Density;
  if (text == "FB_POLYLINE") return PlotKind::FbPolyline;
  if (text == "FIELD_HEATMAP") return PlotKind::FieldHeatmap;
  throw Error(ErrorCode::InvalidUsage, "unknown plot kind " + text);
}

std::string to_string(PlotKind kind) {
  switch (kind) {
    case PlotKind::JCurve:
      return "J_CURVE";
    case PlotKind::Density:
      return "DENSITY";
    case PlotKind::FbPolyline:
      return "FB_POLYLINE";
    default:
      return "FIELD_HEATMAP";
  }
}

int exit_code(const VerificationReport& report) { return report.fail + report.finding == 0 ? 0 : 2; }

void save_boundary_csv(const std::string& path, const Solution& sol) {
  std::ostringstream o;
  o << "x,y,normal_x,normal_y,flux\n";
  for (const auto& b : sol.boundary) {
    o << format_double(b.p.x) << ',' << format_double(b.p.y) << ',' << format_double(b.normal.x) << ','
      << format_double(b.normal.y) << ',' << format_double(b.flux) << '\n';
  }
  write_text(path, o.str());
}

std::vector<Point> load_boundary_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path);
  std::string line;
  std::getline(in, line);
  std::vector<Point> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    Point p;
    char comma = 0;
    if (!(ss >> p.x >> comma >> p.y) || comma != ',') {
      throw Error(ErrorCode::IoFailure, path + ": bad line " + std::to_string(line_no));
    }
    out.push_back(p);
  }
  return out;
}

VerificationReport run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string() + ": " + ec.message());

  const std::vector<Solution> sols = solve_all(cfg, log);
  SolutionSweep sweep;
  for (const auto& s : sols) sweep.push_back(&s);
  const auto t0 = std::chrono::steady_clock::now();
  Environment env{cfg.h, spec_hash(cfg.spec), solver_json(cfg.solver, cfg.mock.has_value())};
  VerificationReport report = assemble_report(run_battery(cfg.spec, sweep, cfg.battery, cfg.solver), env);
  log << "battery: " << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s\n";

  nlohmann::json fields = nlohmann::json::array(), fbs = nlohmann::json::array();
  for (std::size_t k = 0; k < sols.size(); ++k) {
    const std::string f = "solution_" + std::to_string(k) + ".csv";
    const std::string b = "fb_" + std::to_string(k) + ".csv";
    save_field_csv((dir / f).string(), sols[k].u);
    save_boundary_csv((dir / b).string(), sols[k]);
    fields.push_back(f);
    fbs.push_back(b);
  }
  report.artifacts = {{"solutions", fields}, {"free_boundaries", fbs}, {"plots", nlohmann::json::object()}};

  const nlohmann::json base = report.to_json();
  for (PlotKind kind : {PlotKind::JCurve, PlotKind::Density, PlotKind::FbPolyline, PlotKind::FieldHeatmap}) {
    std::string name = to_string(kind);
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
    name += ".svg";
    try {
      write_text(dir / name, plot_report(base, kind, dir.string()));
      report.artifacts["plots"][to_string(kind)] = name;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SeriesMissing) throw;
    }
  }
  write_text(dir / "report.json", report.dump());
  return report;
}

VerificationReport verify_field(const std::string& field_csv, const ExperimentConfig& cfg) {
  const Solution sol = solution_from_field(load_field_csv(field_csv), cfg.spec);
  SolutionSweep sweep{&sol};
  Environment env{{sol.u.grid().h()}, spec_hash(cfg.spec), {{"method", "field"}, {"source", field_csv}}};
  return assemble_report(run_battery(cfg.spec, sweep, cfg.battery, cfg.solver), env);
}

std::string plot_report(const nlohmann::json& report, PlotKind kind, const std::string& report_dir) {
  switch (kind) {
    case PlotKind::JCurve: {
      std::vector<Series> series;
      for (const char* name : {"monotonicity_equality", "monotonicity_quarter"}) {
        const nlohmann::json* c = find_check(report, name);
        if (!c || !c->contains("sweep") || !(*c)["sweep"].contains("R") || !(*c)["measured"].contains("J")) continue;
        series.push_back({name, (*c)["sweep"]["R"].get<std::vector<double>>(),
                          (*c)["measured"]["J"].get<std::vector<double>>()});
      }
      if (series.empty()) missing("no monotonicity check in the report");
      return svg_line_plot("J(R)", "R", "J", series);
    }
    case PlotKind::Density: {
      const nlohmann::json* c = find_check(report, "density");
      if (!c || !(*c)["measured"].contains("points")) missing("no density check in the report");
      const auto r = (*c)["sweep"]["r"].get<std::vector<double>>();
      // One colour per fraction; NaN separates the points.
      Series pos{"positive", {}, {}}, zero{"zero", {}, {}};
      for (const auto& pt : (*c)["measured"]["points"]) {
        const auto pv = pt["positive"].get<std::vector<double>>();
        const auto zv = pt["zero"].get<std::vector<double>>();
        pos.x.insert(pos.x.end(), r.begin(), r.end());
        pos.y.insert(pos.y.end(), pv.begin(), pv.end());
        zero.x.insert(zero.x.end(), r.begin(), r.end());
        zero.y.insert(zero.y.end(), zv.begin(), zv.end());
        pos.x.push_back(NAN);
        pos.y.push_back(NAN);
        zero.x.push_back(NAN);
        zero.y.push_back(NAN);
      }
      return svg_line_plot("density fractions", "r", "fraction", {pos, zero}, true);
    }
    case PlotKind::FbPolyline:
      return svg_point_plot("free boundary", load_boundary_csv(artifact(report, "free_boundaries", report_dir)));
    default:
      return svg_heatmap("u", load_field_csv(artifact(report, "solutions", report_dir)));
  }
}

}  // namespace fbp
