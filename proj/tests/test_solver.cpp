#include <cmath>

#include "doctest.h"
#include "support.hpp"

#include "fbp/barriers.hpp"
#include "fbp/battery.hpp"
#include "fbp/free_boundary.hpp"
#include "fbp/solver.hpp"

using namespace fbp;

namespace {

const Solution& benchmark32() {
  static const Solution s = [] {
    const ProblemSpec spec = radial_spec(2.0);
    return solve_largest_subsolution(spec, make_grid(spec.rect, 1.0 / 32), SolverParams{});
  }();
  return s;
}

}  // namespace

TEST_CASE("spec validation") {
  ProblemSpec s = radial_spec(2.0);
  CHECK_NOTHROW(validate_spec(s));
  s.lambda = 3.0;
  require_code(ErrorCode::SpecInvalid, [&] { validate_spec(s); });
  s = radial_spec(2.0);
  s.f = [](Point p) { return 2.0 + p.x; };  // leaves [2, 2]
  require_code(ErrorCode::SpecInvalid, [&] { validate_spec(s); });
  s = radial_spec(2.0);
  s.D.center = {2.0, 0.0};
  require_code(ErrorCode::SpecInvalid, [&] { validate_spec(s); });
  s = radial_spec(2.0);
  s.g = [](Point) { return -1.0; };
  require_code(ErrorCode::SpecInvalid, [&] { validate_spec(s); });
  CHECK_NOTHROW(validate_spec(modulated_spec()));
}

TEST_CASE("benchmark free boundary at h = 1/32") {
  const Solution& s = benchmark32();
  const double R = radial_solution(1.0, 1.0, 2.0).R;
  REQUIRE(!s.boundary.empty());
  for (const auto& b : s.boundary) CHECK(std::abs(norm(b.p) - R) <= 2.0 / 32);
  CHECK(s.max_mismatch < 0.1);
}

TEST_CASE("solution stays below the barrier and equals g on D") {
  const ProblemSpec spec = radial_spec(2.0);
  const Solution& s = benchmark32();
  const ScalarField w = barrier_field(spec, s.u.grid());
  CHECK(comparison_check(s.u, w, 1e-6).holds);
  for (std::size_t k = 0; k < s.u.grid().size(); ++k) {
    if (norm(s.u.grid().node(k)) <= 1.0) CHECK(s.u[k] == doctest::Approx(1.0));
  }
}

TEST_CASE("comparison check finds an excess") {
  const Grid2D g = make_grid({-1, -1, 1, 1}, 0.25);
  ScalarField v(g, 0.0), w(g, 0.0);
  v(3, 5) = 0.5;
  const ComparisonVerdict c = comparison_check(v, w);
  CHECK(!c.holds);
  CHECK(c.excess == doctest::Approx(0.5));
  CHECK(c.where == g.node(3, 5));
  require_code(ErrorCode::GridMismatch, [&] { comparison_check(v, ScalarField(make_grid({-1, -1, 1, 1}, 0.5))); });
}

TEST_CASE("one-sided residual on the exact profile") {
  const ProblemSpec spec = radial_spec(2.0);
  const RadialSolution w = radial_solution(1.0, 1.0, 2.0);
  const Solution s = solution_from_field(radial_field(w, spec.D, make_grid(spec.rect, 1.0 / 64)), spec);
  const ResidualSummary r = fbc_residual(s, spec);
  CHECK(r.max_abs < 0.15);
}

TEST_CASE("residual needs a free boundary") {
  const ProblemSpec spec = radial_spec(2.0);
  const Solution s = solution_from_field(ScalarField(make_grid(spec.rect, 0.25)), spec);
  require_code(ErrorCode::EmptyFreeBoundary, [&] { fbc_residual(s, spec); });
}

TEST_CASE("viscosity certificate: solver passes, halved field fails") {
  const ProblemSpec spec = radial_spec(2.0);
  const Solution& s = benchmark32();
  const ViscosityReport ok = check_viscosity_subsolution(s, spec, 0.1 * std::sqrt(2.0));
  CHECK(ok.tested > 0);
  CHECK(ok.pass());
  ScalarField half = s.u;
  for (auto& v : half.mutable_values()) v *= 0.5;
  const Solution hs = solution_from_field(half, spec);
  const ViscosityReport bad = check_viscosity_subsolution(hs, spec, 0.1 * std::sqrt(2.0));
  CHECK(bad.tested > 0);
  CHECK(bad.violations.size() == bad.tested);
}

TEST_CASE("energy oracle agrees with the solver") {
  const ProblemSpec spec = radial_spec(2.0);
  const Grid2D g = make_grid(spec.rect, 1.0 / 32);
  const Solution e = ac_energy_minimize(spec, g, SolverParams{});
  const Solution& s = benchmark32();
  double area = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) area += (e.positive[k] != s.positive[k]) ? g.h() * g.h() : 0.0;
  CHECK(area <= 2.0 * g.h() * positivity_perimeter(s));
  CHECK(discrete_energy(e, spec) <= discrete_energy(s, spec) * 1.05);
}
