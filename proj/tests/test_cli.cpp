#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

#include "fbp/config.hpp"
#include "fbp/expr.hpp"
#include "fbp/field_io.hpp"
#include "fbp/geometry.hpp"
#include "fbp/lab.hpp"
#include "fbp/svg.hpp"

using namespace fbp;
namespace fs = std::filesystem;

namespace {

const char* const kBase = R"(
[spec]
center = 0, 0
radius = 1
g = 1
f = 2
lambda = 2
Lambda = 2
rect = -2.5, -2.5, 2.5, 2.5
[grid]
h = 1/32
)";

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("expressions") {
  CHECK(compile_expression("1/128")({}) == 1.0 / 128);
  CHECK(compile_expression("2 + 0.5*sin(4*atan2(y, x))")({0.0, 1.0}) == doctest::Approx(2.0 + 0.5 * std::sin(2 * std::numbers::pi)));
  CHECK(compile_expression("-2^2")({}) == -4.0);
  CHECK(compile_expression("2^3^2")({}) == 512.0);
  CHECK(compile_expression("|x - 3|")({1.0, 0.0}) == 2.0);
  CHECK(compile_expression("r")({3.0, 4.0}) == 5.0);
  CHECK(compile_expression("max(x, y) - min(x, y)")({1.0, 4.0}) == 3.0);
  CHECK(compile_expression("sqrt(exp(log(4))) * cos(pi)")({}) == doctest::Approx(-2.0));
  require_code(ErrorCode::ConfigInvalid, [] { compile_expression("1 +"); });
  require_code(ErrorCode::ConfigInvalid, [] { compile_expression("foo(1)"); });
  require_code(ErrorCode::ConfigInvalid, [] { compile_expression("atan2(1)"); });
  require_code(ErrorCode::ConfigInvalid, [] { compile_expression("(1"); });
  CHECK(message_of([] { compile_expression("1 ) 2"); }).find("position 2") != std::string::npos);
}

TEST_CASE("config parses the bundled benchmark") {
  const ExperimentConfig c = load_config(FBP_SOURCE_DIR "/configs/benchmark_radial.cfg");
  REQUIRE(c.h.size() == 2);
  CHECK(c.h[0] == 1.0 / 64);
  CHECK(c.h[1] == 1.0 / 128);
  CHECK(c.battery.radial_oracle);
  CHECK(c.battery.oracle_h == 1.0 / 64);
  CHECK(c.spec.f({0.3, 0.1}) == 2.0);
  CHECK(c.spec.rect.x1 == 2.5);
  CHECK(!c.mock);
  CHECK(spec_hash(c.spec) == spec_hash(load_config(FBP_SOURCE_DIR "/configs/benchmark_radial.cfg").spec));
}

TEST_CASE("config errors name the field") {
  std::string bad = kBase;
  bad.replace(bad.find("f = 2"), 5, "f = 2*abs(x)");
  const std::string m = message_of([&] { parse_config(bad); });
  CHECK(m.rfind("CONFIG_INVALID: spec.f", 0) == 0);
  CHECK(m.find("lambda") != std::string::npos);

  std::string up = kBase;
  up.replace(up.find("h = 1/32"), 8, "h = 1/64, 1/32");
  CHECK(message_of([&] { parse_config(up); }).find("grid.h") != std::string::npos);

  CHECK(message_of([&] { parse_config(std::string(kBase) + "[solver]\nspeed = 3\n"); }).find("solver.speed") !=
        std::string::npos);
  CHECK(message_of([&] { parse_config(std::string(kBase) + "[checks]\nrun = lipschitz, bogus\n"); })
            .find("checks.run") != std::string::npos);
  CHECK(message_of([&] { parse_config(std::string(kBase) + "[solver]\nmax_iterations = 2.5\n"); })
            .find("solver.max_iterations") != std::string::npos);
  CHECK(message_of([&] { parse_config("[spec]\nf = 2\n"); }).find("spec.g") != std::string::npos);
  CHECK(message_of([&] { parse_config("nokey\n"); }).find("line 1") != std::string::npos);
  require_code(ErrorCode::IoFailure, [] { load_config("/nonexistent.cfg"); });
}

TEST_CASE("mock field with a planted island") {
  const ExperimentConfig c = load_config(FBP_SOURCE_DIR "/configs/planted_defect.cfg");
  REQUIRE(c.mock);
  const ScalarField u = mock_field(*c.mock, c.spec, 1.0 / 64);
  const auto [i, j] = u.grid().nearest({1.3, 0.0});
  CHECK(u(i, j) == 0.0);
  const auto [a, b] = u.grid().nearest({0.0, 1.2});
  CHECK(u(a, b) > 0.0);
}

TEST_CASE("svg output is deterministic") {
  const Series s{"line", {1, 2, 3}, {2, 1, NAN}};
  const std::string a = svg_line_plot("t", "x", "y", {s});
  CHECK(a == svg_line_plot("t", "x", "y", {s}));
  CHECK(a.find("viewBox=\"0 0 640 400\"") != std::string::npos);
  CHECK(a.find("<polyline") != std::string::npos);
  const ScalarField u = sample_field(make_grid({0, 0, 1, 1}, 0.25), [](Point p) { return p.x; });
  CHECK(svg_heatmap("u", u) == svg_heatmap("u", u));
}

TEST_CASE("plot kinds and missing series") {
  CHECK(parse_plot_kind("J_CURVE") == PlotKind::JCurve);
  require_code(ErrorCode::InvalidUsage, [] { parse_plot_kind("PIE"); });
  const nlohmann::json empty = {{"checks", nlohmann::json::array()}};
  require_code(ErrorCode::SeriesMissing, [&] { plot_report(empty, PlotKind::JCurve, "."); });
  require_code(ErrorCode::SeriesMissing, [&] { plot_report(empty, PlotKind::Density, "."); });
  const nlohmann::json gone = {{"artifacts", {{"solutions", {"missing.csv"}}}}};
  require_code(ErrorCode::SeriesMissing, [&] { plot_report(gone, PlotKind::FieldHeatmap, "/nonexistent"); });
}

TEST_CASE("experiment on the planted defect") {
  ExperimentConfig c = load_config(FBP_SOURCE_DIR "/configs/planted_defect.cfg");
  c.h = {1.0 / 64};
  const fs::path dir = fs::temp_directory_path() / "fbp_test_planted";
  fs::remove_all(dir);
  c.output_dir = dir.string();
  std::ostringstream log;
  const VerificationReport r = run_experiment(c, log);
  CHECK(exit_code(r) == 2);
  bool flagged = false;
  for (const auto& rec : r.checks) flagged = flagged || (rec.name == "zero_audit" && rec.verdict == Verdict::Finding);
  CHECK(flagged);
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "solution_0.csv"));
  CHECK(fs::exists(dir / "fb_0.csv"));
  CHECK(fs::exists(dir / "field_heatmap.svg"));
  CHECK(!load_boundary_csv((dir / "fb_0.csv").string()).empty());

  // Same config, same bytes.
  std::ifstream first(dir / "report.json");
  std::stringstream a;
  a << first.rdbuf();
  run_experiment(c, log);
  std::ifstream second(dir / "report.json");
  std::stringstream b;
  b << second.rdbuf();
  CHECK(a.str() == b.str());

  const VerificationReport v = verify_field((dir / "solution_0.csv").string(), c);
  CHECK(exit_code(v) == 2);
  fs::remove_all(dir);
}
