#include "fbp/battery.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include "fbp/barriers.hpp"
#include "fbp/error.hpp"
#include "fbp/free_boundary.hpp"
#include "fbp/geometry.hpp"
#include "fbp/kernels.hpp"

namespace fbp {

namespace {

using Check = std::function<CheckRecord(const ProblemSpec&, const SolutionSweep&, const BatteryOptions&,
                                        const SolverParams&)>;

nlohmann::json hs(const SolutionSweep& sweep) {
  nlohmann::json out = nlohmann::json::array();
  for (const Solution* s : sweep) out.push_back(s->u.grid().h());
  return out;
}

CheckRecord fb_radius(const ProblemSpec& spec, const SolutionSweep& sweep, const BatteryOptions& opt,
                      const SolverParams&) {
  CheckRecord rec;
  rec.name = "fb_radius";
  rec.statement = "distance from the centre of D to the computed free boundary";
  nlohmann::json lo = nlohmann::json::array(), hi = nlohmann::json::array();
  bool ok = true;
  double R = 0.0;
  if (opt.radial_oracle) {
    const Point e{spec.D.center.x + spec.D.radius, spec.D.center.y};
    R = radial_solution(spec.D.radius, spec.g(e), spec.f(spec.D.center), spec.D.center).R;
  }
  for (const Solution* s : sweep) {
    if (s->boundary.empty()) throw Error(ErrorCode::EmptyFreeBoundary, "no free boundary for the radius check");
    double a = INFINITY, b = 0.0;
    for (const auto& p : s->boundary) {
      const double r = distance(p.p, spec.D.center);
      a = std::min(a, r);
      b = std::max(b, r);
    }
    lo.push_back(a);
    hi.push_back(b);
    if (opt.radial_oracle) ok = ok && std::abs(a - R) <= 2.0 * s->u.grid().h() && std::abs(b - R) <= 2.0 * s->u.grid().h();
  }
  rec.measured = {{"r_min", lo}, {"r_max", hi}};
  if (opt.radial_oracle) {
    rec.measured["R_oracle"] = R;
    rec.tolerance = {{"abs", "2h"}};
  } else {
    rec.detail = "no radial oracle for this spec; ranges reported only";
  }
  rec.sweep = {{"h", hs(sweep)}};
  rec.verdict = ok ? Verdict::Pass : Verdict::Fail;
  return rec;
}

CheckRecord fbc(const ProblemSpec& spec, const SolutionSweep& sweep, const BatteryOptions& opt, const SolverParams&) {
  CheckRecord rec;
  rec.name = "fbc_residual";
  rec.statement = "max | |grad u|^2 - f | on the free boundary, one-sided gradient, shrinks under refinement";
  std::vector<double> mx;
  nlohmann::json mean = nlohmann::json::array(), skipped = nlohmann::json::array();
  for (const Solution* s : sweep) {
    const ResidualSummary r = fbc_residual(*s, spec);
    mx.push_back(r.max_abs);
    mean.push_back(r.mean);
    skipped.push_back(r.skipped);
  }
  bool ok = true;
  nlohmann::json factors = nlohmann::json::array();
  for (std::size_t m = 1; m < mx.size(); ++m) {
    const double f = mx[m] > 0.0 ? mx[m - 1] / mx[m] : INFINITY;
    factors.push_back(f);
    ok = ok && f >= opt.fbc_factor;
  }
  if (mx.size() < 2) rec.detail = "single grid; no rate measured";
  rec.measured = {{"max_abs", mx}, {"mean", mean}, {"skipped", skipped}, {"drop_factor", factors}};
  rec.tolerance = {{"min_drop_factor", opt.fbc_factor}};
  rec.sweep = {{"h", hs(sweep)}};
  rec.verdict = ok ? Verdict::Pass : Verdict::Fail;
  return rec;
}

CheckRecord viscosity(const ProblemSpec& spec, const SolutionSweep& sweep, const BatteryOptions& opt,
                      const SolverParams&) {
  const Solution& s = *sweep.back();
  const double tol = opt.viscosity_tol * std::sqrt(spec.lambda);
  const ViscosityReport rep = check_viscosity_subsolution(s, spec, tol);
  // The same test must reject the halved field.
  Solution half = s;
  for (double& v : half.u.mutable_values()) v *= 0.5;
  const ViscosityReport neg = check_viscosity_subsolution(half, spec, tol);
  CheckRecord rec;
  rec.name = "viscosity";
  rec.statement = "at free-boundary points with an exterior tangent ball the slope of u is at least sqrt(f); "
                  "u is discretely subharmonic away from D";
  nlohmann::json worst = nlohmann::json::array();
  for (std::size_t m = 0; m < std::min<std::size_t>(rep.violations.size(), 10); ++m) {
    const auto& v = rep.violations[m];
    worst.push_back({{"p", {v.p.x, v.p.y}}, {"slope", v.slope}, {"required", v.required}});
  }
  rec.measured = {{"points", rep.points},
                  {"tested", rep.tested},
                  {"violations", rep.violations.size()},
                  {"first_violations", worst},
                  {"subharmonic_nodes", rep.subharmonic_nodes},
                  {"subharmonic_violations", rep.subharmonic_violations},
                  {"min_laplacian", rep.min_laplacian},
                  {"halved_tested", neg.tested},
                  {"halved_violations", neg.violations.size()}};
  rec.tolerance = {{"tol", tol}};
  rec.sweep = {{"h", s.u.grid().h()}};
  const bool ok = rep.pass() && rep.tested > 0 && neg.violations.size() == neg.tested;
  rec.verdict = ok ? Verdict::Pass : Verdict::Fail;
  return rec;
}

CheckRecord comparison(const ProblemSpec& spec, const SolutionSweep& sweep, const BatteryOptions&,
                       const SolverParams& params) {
  CheckRecord rec;
  rec.name = "comparison";
  rec.statement = "u stays below the radial supersolution barrier";
  nlohmann::json excess = nlohmann::json::array();
  bool ok = true;
  // Ten times the harmonic solve tolerance: where u meets the barrier the
  // two agree only to that accuracy.
  const double tol = 10.0 * (params.tol > 0.0 ? params.tol : 1e-8 * g_max(spec));
  for (const Solution* s : sweep) {
    const ComparisonVerdict v = comparison_check(s->u, barrier_field(spec, s->u.grid()), tol);
    excess.push_back(v.excess);
    ok = ok && v.holds;
  }
  rec.measured = {{"max_excess", excess}, {"R0", spec_barrier(spec).R0}};
  rec.tolerance = {{"abs", tol}};
  rec.sweep = {{"h", hs(sweep)}};
  rec.verdict = ok ? Verdict::Pass : Verdict::Fail;
  return rec;
}

CheckRecord lipschitz(const ProblemSpec& spec, const SolutionSweep& sweep, const BatteryOptions& opt,
                      const SolverParams&) {
  return lipschitz_report(sweep, spec, opt.stability);
}

CheckRecord nondegeneracy(const ProblemSpec& spec, const SolutionSweep& sweep, const BatteryOptions& opt,
                          const SolverParams&) {
  NondegeneracyParams p;
  p.points = opt.sample_points;
  p.kappa_factor = opt.kappa_factor;
  p.stability = opt.stability;
  return nondegeneracy_report(sweep, spec, p);
}

CheckRecord mass(const ProblemSpec& spec, const SolutionSweep& sweep, const BatteryOptions& opt, const SolverParams&) {
  const Solution& s = *sweep.back();
  const auto pts = pick_boundary_points(s, spec.D.center, 1);
  if (pts.empty()) throw Error(ErrorCode::EmptyFreeBoundary, "no free boundary for the mass check");
  std::vector<double> radii;
  for (double r : opt.mass_radii) {
    if (r >= 2.0 * s.u.grid().h()) radii.push_back(r);
  }
  return laplacian_mass_report(s, spec, pts.front(), radii, opt.mass_ratio);
}

CheckRecord green(const ProblemSpec& spec, const SolutionSweep& sweep, const BatteryOptions& opt, const SolverParams&) {
  const Solution& s = *sweep.back();
  const double h = s.u.grid().h();
  CheckRecord rec;
  rec.name = "green_identity";
  rec.statement = "u(x0) equals its Green representation over a ball centred on the free boundary";
  nlohmann::json res = nlohmann::json::array(), where = nlohmann::json::array();
  bool ok = true;
  for (const Point& p : pick_boundary_points(s, spec.D.center, opt.green_points)) {
    const double r = green_identity_residual(s.u, p, opt.green_radius);
    res.push_back(r);
    where.push_back({p.x, p.y});
    ok = ok && r <= opt.green_factor * h;
  }
  rec.measured = {{"residual", res}, {"centres", where}};
  rec.tolerance = {{"max", opt.green_factor * h}};
  rec.sweep = {{"h", h}, {"r", opt.green_radius}};
  rec.verdict = ok ? Verdict::Pass : Verdict::Fail;
  return rec;
}

CheckRecord density(const ProblemSpec& spec, const SolutionSweep& sweep, const BatteryOptions& opt,
                    const SolverParams&) {
  const Solution& s = *sweep.back();
  const Grid2D& g = s.u.grid();
  const double h = g.h();
  std::vector<double> radii;
  for (double r = opt.density_r_max; r >= 8.0 * h * (1.0 - 1e-12); r *= 0.5) radii.push_back(r);
  CheckRecord rec;
  rec.name = "density";
  rec.statement = "both the positivity set and its complement fill a fixed fraction of every small ball "
                  "centred on the free boundary; the zero set holds a ball of comparable size";
  double pmin = 1.0, pmax = 0.0, zmin = 1.0, zmax = 0.0, inscribed = INFINITY, gap = 0.0;
  bool ok = true;
  nlohmann::json rows = nlohmann::json::array();
  for (const Point& p : pick_boundary_points(s, spec.D.center, opt.sample_points)) {
    nlohmann::json pos = nlohmann::json::array(), zero = nlohmann::json::array();
    for (const auto& d : density_profile(g, s.positive, p, radii)) {
      pmin = std::min(pmin, d.positive_fraction);
      pmax = std::max(pmax, d.positive_fraction);
      zmin = std::min(zmin, d.zero_fraction);
      zmax = std::max(zmax, d.zero_fraction);
      gap = std::max(gap, std::abs(d.positive_fraction + d.zero_fraction - 1.0) * d.r / h);
      pos.push_back(d.positive_fraction);
      zero.push_back(d.zero_fraction);
    }
    const ZeroAudit a = zero_component_audit(g, s.positive, Disk{p, opt.window});
    const double ratio = a.inscribed_radius / opt.window;
    inscribed = std::min(inscribed, ratio);
    rows.push_back({{"p", {p.x, p.y}}, {"positive", pos}, {"zero", zero}, {"inscribed_over_window", ratio}});
  }
  const double c = opt.density_c;
  ok = pmin >= c && pmax <= 1.0 - c && zmin >= c && zmax <= 1.0 - c && inscribed >= opt.inscribed_min;
  rec.measured = {{"positive_min", pmin}, {"positive_max", pmax}, {"zero_min", zmin},
                  {"zero_max", zmax},     {"inscribed_min", inscribed}, {"complement_gap_r_over_h", gap},
                  {"points", rows}};
  rec.tolerance = {{"band", {c, 1.0 - c}}, {"inscribed_min", opt.inscribed_min}};
  rec.sweep = {{"r", radii}, {"h", h}, {"window", opt.window}};
  rec.verdict = ok ? Verdict::Pass : Verdict::Fail;
  return rec;
}

CheckRecord zero_audit(const ProblemSpec& spec, const SolutionSweep& sweep, const BatteryOptions& opt,
                       const SolverParams&) {
  const Solution& s = *sweep.back();
  const Grid2D& g = s.u.grid();
  CheckRecord rec;
  rec.name = "zero_audit";
  rec.statement = "no open component of the zero set is strictly contained in a ball centred on the free boundary";
  nlohmann::json flagged = nlohmann::json::array();
  std::size_t windows = 0;
  auto flag = [&](const Component& c, const char* where) {
    flagged.push_back({{"centroid", {c.centroid.x, c.centroid.y}},
                       {"nodes", c.nodes.size()},
                       {"area", c.area},
                       {"diameter", c.diameter},
                       {"found_in", where}});
  };
  for (const Point& p : pick_boundary_points(s, spec.D.center, opt.sample_points)) {
    if (!g.contains_ball(p, opt.audit_radius)) continue;
    ++windows;
    for (const auto& c : zero_component_audit(g, s.positive, Disk{p, opt.audit_radius}).interior) flag(c, "window");
  }
  // Whole grid: a zero component that never reaches the grid edge is an island.
  const RegionDecomposition dec = label_components(g, s.positive);
  for (const auto& c : dec.zero_components) {
    bool edge = false;
    for (std::size_t k : c.nodes) edge = edge || g.on_edge(g.i_of(k), g.j_of(k));
    if (!edge) flag(c, "grid");
  }
  rec.measured = {{"windows", windows}, {"flagged", flagged}, {"zero_components", dec.zero_components.size()}};
  rec.tolerance = {{"interior_components", 0}};
  rec.sweep = {{"h", g.h()}, {"radius", opt.audit_radius}};
  rec.verdict = flagged.empty() ? Verdict::Pass : Verdict::Finding;
  return rec;
}

CheckRecord exclusion(const ProblemSpec& spec, const SolutionSweep& sweep, const BatteryOptions& opt,
                      const SolverParams&) {
  std::vector<ExclusionProbe> probes;
  for (const Point& p : pick_boundary_points(*sweep.back(), spec.D.center, opt.exclusion_points)) {
    probes.push_back(two_component_exclusion_probe(sweep, p, opt.exclusion_eps, opt.window));
  }
  return exclusion_record("two_component_exclusion", probes);
}

CheckRecord oracle(const ProblemSpec& spec, const SolutionSweep&, const BatteryOptions& opt,
                   const SolverParams& params) {
  const Grid2D grid = make_grid(spec.rect, opt.oracle_h);
  const Solution a = solve_largest_subsolution(spec, grid, params);
  const Solution b = ac_energy_minimize(spec, grid, params);
  std::size_t diff = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) diff += a.positive[k] != b.positive[k];
  const double h = grid.h();
  const double area = static_cast<double>(diff) * h * h;
  const double per = positivity_perimeter(a);
  const double bound = opt.oracle_C * h * per;
  CheckRecord rec;
  rec.name = "oracle_agreement";
  rec.statement = "the trial free-boundary solver and an independent energy minimiser give the same positivity set "
                  "up to a band of width O(h)";
  rec.measured = {{"symmetric_difference_area", area},
                  {"perimeter", per},
                  {"energy_solver", discrete_energy(a, spec)},
                  {"energy_oracle", discrete_energy(b, spec)},
                  {"oracle_converged", b.converged},
                  {"oracle_iterations", b.log.size()}};
  rec.tolerance = {{"C", opt.oracle_C}, {"max_area", bound}};
  rec.sweep = {{"h", h}};
  rec.verdict = area <= bound ? Verdict::Pass : Verdict::Finding;
  if (area > bound) rec.detail = "positivity sets disagree beyond C h perimeter";
  return rec;
}

// Positivity-disjoint pairs on [-1, 1]^2, independent of the spec.
CheckRecord monotonicity(bool quarter, const BatteryOptions& opt) {
  const Grid2D g = make_grid({-1.0, -1.0, 1.0, 1.0}, opt.j_h);
  ScalarField u1(g), u2(g);
  if (quarter) {
    // Quarter sector {-π/2 < θ < 0} against the complementary three-quarter sector.
    const SectorHarmonic a = sector_harmonic(4.0);
    const SectorHarmonic b = sector_harmonic(4.0 / 3.0);
    u1 = sample_field(g, [&](Point p) { return a.positive_part(p); });
    u2 = sample_field(g, [&](Point p) { return b.positive_part(Point{-p.y, p.x}); });
  } else {
    u1 = sample_field(g, [](Point p) { return std::max(0.0, p.y); });
    u2 = sample_field(g, [](Point p) { return std::max(0.0, -p.y); });
  }
  std::vector<double> radii;
  for (int m = 0; m < opt.j_radii; ++m) {
    radii.push_back(opt.j_r_min + (opt.j_r_max - opt.j_r_min) * m / std::max(1, opt.j_radii - 1));
  }
  const MonotonicityResult r = monotonicity_J(u1, u2, {0.0, 0.0}, radii);
  CheckRecord rec = monotonicity_record(quarter ? "monotonicity_quarter" : "monotonicity_equality", r, quarter);
  if (!quarter) {
    // Equality case: J is π^2/4 at every radius, to the quadrature bound
    // 10 J / M^2 with M = R_min / h cells across the smallest radius.
    const double target = std::numbers::pi * std::numbers::pi / 4.0;
    const double M = opt.j_r_min / opt.j_h;
    double dev = 0.0;
    for (const auto& s : r.samples) dev = std::max(dev, std::abs(s.J - target));
    const double tol = 10.0 * target / (M * M);
    rec.measured["J_target"] = target;
    rec.measured["max_deviation"] = dev;
    rec.tolerance["equality"] = tol;
    if (dev > tol) rec.verdict = Verdict::Fail;
  }
  return rec;
}

CheckRecord arc_eigen(const BatteryOptions&) {
  const std::vector<Rational> alphas{{1, 8}, {1, 4}, {1, 3}, {1, 2}, {2, 3}, {3, 4}};
  const int M = 400;
  const auto rows = arc_eigenvalue_bound(alphas, M);
  CheckRecord rec;
  rec.name = "arc_eigenvalues";
  rec.statement = "first Dirichlet eigenvalue on an arc of length 2 pi alpha is 1/(2 alpha)^2, and "
                  "1/(2 alpha) + 1/(2 (1 - alpha)) >= 2 with equality at alpha = 1/2";
  nlohmann::json table = nlohmann::json::array();
  bool ok = true;
  for (const auto& r : rows) {
    table.push_back({{"alpha", std::to_string(r.alpha.num) + "/" + std::to_string(r.alpha.den)},
                     {"bound", std::to_string(r.bound.num) + "/" + std::to_string(r.bound.den)},
                     {"bound_value", r.bound_value},
                     {"sqrt_mu", r.sqrt_mu},
                     {"exact", r.exact},
                     {"rel_error", r.rel_error}});
    ok = ok && r.rel_error <= 1.0 / (static_cast<double>(M) * M) && r.bound.num >= 2 * r.bound.den;
  }
  rec.measured = {{"table", table}};
  rec.tolerance = {{"rel_error", 1.0 / (static_cast<double>(M) * M)}};
  rec.sweep = {{"M", M}};
  rec.verdict = ok ? Verdict::Pass : Verdict::Fail;
  return rec;
}

const std::map<std::string, Check>& registry() {
  static const std::map<std::string, Check> r{
      {"comparison", comparison},     {"density", density},       {"fb_radius", fb_radius},
      {"fbc_residual", fbc},          {"green_identity", green},  {"laplacian_mass", mass},
      {"lipschitz", lipschitz},       {"nondegeneracy", nondegeneracy},
      {"oracle_agreement", oracle},   {"two_component_exclusion", exclusion},
      {"viscosity", viscosity},       {"zero_audit", zero_audit},
      {"monotonicity_equality",
       [](const ProblemSpec&, const SolutionSweep&, const BatteryOptions& o, const SolverParams&) {
         return monotonicity(false, o);
       }},
      {"monotonicity_quarter",
       [](const ProblemSpec&, const SolutionSweep&, const BatteryOptions& o, const SolverParams&) {
         return monotonicity(true, o);
       }},
      {"arc_eigenvalues",
       [](const ProblemSpec&, const SolutionSweep&, const BatteryOptions& o, const SolverParams&) {
         return arc_eigen(o);
       }},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& battery_checks() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, v] : registry()) n.push_back(k);
    return n;
  }();
  return names;
}

std::vector<CheckRecord> run_battery(const ProblemSpec& spec, const SolutionSweep& sweep, const BatteryOptions& opt,
                                     const SolverParams& params) {
  if (sweep.empty()) throw Error(ErrorCode::InvalidUsage, "battery needs at least one solution");
  std::vector<std::string> names = opt.checks.empty() ? battery_checks() : opt.checks;
  std::vector<CheckRecord> out;
  for (const auto& n : names) {
    const auto it = registry().find(n);
    if (it == registry().end()) throw Error(ErrorCode::InvalidUsage, "unknown check " + n);
    if (n == "oracle_agreement" && opt.oracle_h <= 0.0) continue;
    try {
      out.push_back(it->second(spec, sweep, opt, params));
    } catch (const Error& e) {
      // A check that cannot run is reported, not dropped.
      CheckRecord rec;
      rec.name = n;
      rec.statement = "check could not run";
      rec.verdict = Verdict::Fail;
      rec.detail = e.what();
      out.push_back(rec);
    }
  }
  return out;
}

double positivity_perimeter(const Solution& sol) {
  std::vector<double> v(sol.positive.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = sol.positive[k] ? -1.0 : 1.0;
  return total_length(contour_segments(sol.u.grid(), v));
}

}  // namespace fbp
