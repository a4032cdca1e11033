#include "fbp/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "fbp/solver.hpp"
#include "fbp/error.hpp"
#include "fbp/expr.hpp"

namespace fbp {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::ConfigInvalid, field + ": " + why);
}

std::string detail_of(const Error& e) {
  const std::string w = e.what();
  const auto c = w.find(": ");
  return c == std::string::npos ? w : w.substr(c + 2);
}

// Numbers may be constant expressions such as 1/128.
double number(const std::string& field, const std::string& text) {
  double v = 0.0;
  try {
    v = compile_expression(text)({0.0, 0.0});
  } catch (const Error& e) {
    bad(field, detail_of(e));
  }
  if (!std::isfinite(v)) bad(field, "not a finite number: " + text);
  return v;
}

std::vector<double> numbers(const std::string& field, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(number(field, trim(item)));
  return out;
}

bool boolean(const std::string& field, const std::string& text) {
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  bad(field, "expected true or false, got " + text);
}

int integer(const std::string& field, const std::string& text) {
  const double v = number(field, text);
  if (v != std::floor(v) || std::abs(v) > 1e9) bad(field, "expected an integer, got " + text);
  return static_cast<int>(v);
}

double positive(const std::string& field, const std::string& text) {
  const double v = number(field, text);
  if (!(v > 0.0)) bad(field, "must be positive");
  return v;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  std::map<std::string, std::string> kv;  // "section.key" -> value
  std::stringstream ss(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') bad("line " + std::to_string(lineno), "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) bad("line " + std::to_string(lineno), "expected key = value");
    if (section.empty()) bad("line " + std::to_string(lineno), "key outside a section");
    const std::string key = section + "." + trim(line.substr(0, eq));
    if (kv.count(key)) bad(key, "given twice");
    kv[key] = trim(line.substr(eq + 1));
  }

  ExperimentConfig cfg;
  ProblemSpec& s = cfg.spec;
  SolverParams& p = cfg.solver;
  BatteryOptions& b = cfg.battery;
  std::string mock_kind;
  std::vector<double> island;
  bool have_g = false, have_f = false, have_h = false;
  for (const auto& [key, value] : kv) {
    if (key == "spec.center") {
      const auto v = numbers(key, value);
      if (v.size() != 2) bad(key, "expected x, y");
      s.D.center = {v[0], v[1]};
    } else if (key == "spec.radius") {
      s.D.radius = positive(key, value);
    } else if (key == "spec.g") {
      try {
        s.g = compile_expression(value);
      } catch (const Error& e) {
        bad(key, detail_of(e));
      }
      s.g_text = value;
      have_g = true;
    } else if (key == "spec.f") {
      try {
        s.f = compile_expression(value);
      } catch (const Error& e) {
        bad(key, detail_of(e));
      }
      s.f_text = value;
      have_f = true;
    } else if (key == "spec.lambda") {
      s.lambda = number(key, value);
    } else if (key == "spec.Lambda") {
      s.Lambda = number(key, value);
    } else if (key == "spec.rect") {
      const auto v = numbers(key, value);
      if (v.size() != 4) bad(key, "expected x0, y0, x1, y1");
      s.rect = {v[0], v[1], v[2], v[3]};
    } else if (key == "grid.h") {
      cfg.h = numbers(key, value);
      have_h = true;
    } else if (key == "solver.fbc_tol") {
      p.fbc_tol = positive(key, value);
    } else if (key == "solver.move_tol") {
      p.move_tol = positive(key, value);
    } else if (key == "solver.move_fraction") {
      p.move_fraction = positive(key, value);
    } else if (key == "solver.max_iterations") {
      p.max_iterations = integer(key, value);
    } else if (key == "solver.smooth_scale") {
      p.smooth_scale = number(key, value);
    } else if (key == "solver.smooth_gain") {
      p.smooth_gain = number(key, value);
    } else if (key == "solver.local_gain") {
      p.local_gain = number(key, value);
    } else if (key == "solver.tol") {
      p.tol = number(key, value);
    } else if (key == "solver.max_sweeps") {
      p.max_sweeps = integer(key, value);
    } else if (key == "solver.coarse_start") {
      p.coarse_start = boolean(key, value);
    } else if (key == "solver.coarse_h") {
      p.coarse_h = positive(key, value);
    } else if (key == "checks.run") {
      b.checks.clear();
      if (value != "all") {
        std::stringstream cs(value);
        std::string item;
        while (std::getline(cs, item, ',')) {
          item = trim(item);
          const auto& all = battery_checks();
          if (std::find(all.begin(), all.end(), item) == all.end()) bad(key, "unknown check " + item);
          b.checks.push_back(item);
        }
      }
    } else if (key == "checks.radial_oracle") {
      b.radial_oracle = boolean(key, value);
    } else if (key == "checks.oracle_h") {
      b.oracle_h = number(key, value);
    } else if (key == "checks.oracle_C") {
      b.oracle_C = positive(key, value);
    } else if (key == "checks.sample_points") {
      b.sample_points = static_cast<std::size_t>(std::max(1, integer(key, value)));
    } else if (key == "checks.fbc_factor") {
      b.fbc_factor = positive(key, value);
    } else if (key == "checks.viscosity_tol") {
      b.viscosity_tol = number(key, value);
    } else if (key == "checks.stability") {
      b.stability = positive(key, value);
    } else if (key == "checks.kappa_factor") {
      b.kappa_factor = positive(key, value);
    } else if (key == "checks.mass_ratio") {
      b.mass_ratio = positive(key, value);
    } else if (key == "checks.mass_radii") {
      b.mass_radii = numbers(key, value);
    } else if (key == "checks.green_points") {
      b.green_points = static_cast<std::size_t>(std::max(1, integer(key, value)));
    } else if (key == "checks.green_radius") {
      b.green_radius = positive(key, value);
    } else if (key == "checks.green_factor") {
      b.green_factor = positive(key, value);
    } else if (key == "checks.density_c") {
      b.density_c = number(key, value);
    } else if (key == "checks.density_r_max") {
      b.density_r_max = positive(key, value);
    } else if (key == "checks.window") {
      b.window = positive(key, value);
    } else if (key == "checks.inscribed_min") {
      b.inscribed_min = number(key, value);
    } else if (key == "checks.audit_radius") {
      b.audit_radius = positive(key, value);
    } else if (key == "checks.exclusion_eps") {
      b.exclusion_eps = numbers(key, value);
    } else if (key == "checks.exclusion_points") {
      b.exclusion_points = static_cast<std::size_t>(std::max(1, integer(key, value)));
    } else if (key == "field.kind") {
      if (value != "radial" && value != "radial_island") bad(key, "expected radial or radial_island");
      mock_kind = value;
    } else if (key == "field.island") {
      island = numbers(key, value);
      if (island.size() != 3 || !(island[2] > 0.0)) bad(key, "expected x, y, radius with radius > 0");
    } else if (key == "output.dir") {
      if (value.empty()) bad(key, "empty directory");
      cfg.output_dir = value;
    } else {
      bad(key, "unknown field");
    }
  }
  if (!have_g) bad("spec.g", "missing");
  if (!have_f) bad("spec.f", "missing");
  if (!have_h || cfg.h.empty()) bad("grid.h", "missing");
  for (std::size_t k = 0; k < cfg.h.size(); ++k) {
    if (!(cfg.h[k] > 0.0)) bad("grid.h", "spacings must be positive");
    if (k > 0 && !(cfg.h[k] < cfg.h[k - 1])) bad("grid.h", "spacings must be strictly decreasing");
  }
  if (!(s.lambda > 0.0)) bad("spec.lambda", "must be positive");
  if (!(s.Lambda >= s.lambda)) bad("spec.Lambda", "must be at least lambda");
  try {
    validate_spec(s);
  } catch (const Error& e) {
    const std::string d = detail_of(e);
    const std::string field = d.rfind("f = ", 0) == 0 ? "spec.f" : d.rfind("g ", 0) == 0 ? "spec.g" : "spec";
    bad(field, d);
  }
  if (!mock_kind.empty()) {
    if (mock_kind == "radial_island" && island.empty()) bad("field.island", "missing for radial_island");
    MockField m;
    m.kind = mock_kind;
    if (!island.empty()) {
      m.island_center = {island[0], island[1]};
      m.island_radius = island[2];
    }
    cfg.mock = m;
  } else if (!island.empty()) {
    bad("field.island", "needs field.kind");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

ScalarField mock_field(const MockField& mock, const ProblemSpec& spec, double h) {
  const Point e{spec.D.center.x + spec.D.radius, spec.D.center.y};
  const RadialSolution w = radial_solution(spec.D.radius, spec.g(e), spec.f(spec.D.center), spec.D.center);
  ScalarField u = radial_field(w, spec.D, make_grid(spec.rect, h));
  if (mock.kind == "radial_island") {
    // A zero disk cut out of the positivity set, joined to w by a cone.
    const double slope = std::sqrt(spec.f(mock.island_center));
    for (std::size_t k = 0; k < u.grid().size(); ++k) {
      const double d = distance(u.grid().node(k), mock.island_center) - mock.island_radius;
      u[k] = std::min(u[k], slope * std::max(0.0, d));
    }
  }
  return u;
}

}  // namespace fbp
