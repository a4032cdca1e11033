#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "support.hpp"

#include "fbp/barriers.hpp"
#include "fbp/battery.hpp"
#include "fbp/free_boundary.hpp"
#include "fbp/solver.hpp"
#include "fbp/verify.hpp"

using namespace fbp;

namespace {

constexpr double kR = 1.5692542646770047;

Solution exact_benchmark(double h) {
  const ProblemSpec spec = radial_spec(2.0);
  return solution_from_field(radial_field(radial_solution(1.0, 1.0, 2.0), spec.D, make_grid(spec.rect, h)), spec);
}

Solution with_mask(ScalarField u) {
  Solution s(std::move(u));
  s.positive.resize(s.u.grid().size());
  for (std::size_t k = 0; k < s.positive.size(); ++k) s.positive[k] = s.u[k] > 0.0;
  return s;
}

}  // namespace

TEST_CASE("lipschitz constants of the exact profile") {
  const Solution a = exact_benchmark(1.0 / 64), b = exact_benchmark(1.0 / 128);
  const CheckRecord r = lipschitz_report({&a, &b}, radial_spec(2.0));
  const double C2 = r.measured["C2"].back().get<double>();
  CHECK(std::abs(C2 - 1.0 / std::log(kR)) <= 0.1 / std::log(kR));
  CHECK(r.verdict == Verdict::Pass);
}

TEST_CASE("lipschitz needs a positivity set") {
  const ProblemSpec spec = radial_spec(2.0);
  const Solution z = with_mask(ScalarField(make_grid(spec.rect, 0.125)));
  require_code(ErrorCode::EmptyPositivitySet, [&] { lipschitz_report({&z}, spec); });
}

TEST_CASE("sup ratio matches the closed form") {
  const Solution s = exact_benchmark(1.0 / 128);
  const double r = 0.1;
  const double ratio = sup_ratios(s, {kR, 0.0}, std::vector<double>{r}, false).front();
  const double exact = std::log(kR / (kR - r)) / (r * std::log(kR));
  // The farthest node inside the ball can sit up to h short of the rim.
  const double h = 1.0 / 128;
  const double lower = std::log(kR / (kR - r + h)) / (r * std::log(kR));
  CHECK(exact == doctest::Approx(1.46).epsilon(0.01));
  CHECK(ratio <= exact + 1e-12);
  CHECK(ratio >= lower - 1e-12);
  CHECK(ratio >= 0.5 * std::sqrt(2.0));
  const Solution coarse = exact_benchmark(0.125);
  require_code(ErrorCode::RadiusTooSmall, [&] { sup_ratios(coarse, {kR, 0.0}, std::vector<double>{0.25}, false); });
}

TEST_CASE("laplacian mass: half-plane, interior ball and the circle") {
  const Grid2D g = make_grid({-1, -1, 1, 1}, 1.0 / 256);
  const ScalarField half = sample_field(g, [](Point p) { return std::max(0.0, p.y); });
  const std::vector<double> radii{0.4, 0.2, 0.1, 0.05};
  const auto m = laplacian_mass(half, {0.0, 0.0}, radii);
  for (std::size_t k = 0; k < radii.size(); ++k) CHECK(m[k] / radii[k] == doctest::Approx(2.0).epsilon(0.1));

  const auto inner = laplacian_mass(half, {0.0, 0.5}, std::vector<double>{0.3});
  CHECK(std::abs(inner.front()) <= 1e-9);

  const Solution s = exact_benchmark(1.0 / 128);
  const auto c = laplacian_mass(s.u, {kR, 0.0}, std::vector<double>{0.1, 0.05});
  for (double v : c) CHECK(v / 0.1 > 0.0);
  CHECK(c[0] / 0.1 == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(0.15));
  require_code(ErrorCode::BallOutsideGrid, [&] { laplacian_mass(half, {0.9, 0.0}, std::vector<double>{0.2}); });
}

TEST_CASE("disk-rectangle area") {
  CHECK(disk_rect_area({0, 0}, 1.0, {-2, -2, 2, 2}) == doctest::Approx(std::numbers::pi));
  CHECK(disk_rect_area({0, 0}, 1.0, {0, 0, 2, 2}) == doctest::Approx(std::numbers::pi / 4));
  CHECK(disk_rect_area({0, 0}, 1.0, {-1, 0, 1, 0.5}) ==
        doctest::Approx(0.5 * std::sqrt(0.75) + std::asin(0.5)));
  CHECK(disk_rect_area({5, 5}, 1.0, {0, 0, 1, 1}) == 0.0);
}

TEST_CASE("J on the equality pair is constant") {
  const double h = 1.0 / 128;
  const Grid2D g = make_grid({-1, -1, 1, 1}, h);
  const ScalarField u1 = sample_field(g, [](Point p) { return std::max(0.0, p.y); });
  const ScalarField u2 = sample_field(g, [](Point p) { return std::max(0.0, -p.y); });
  std::vector<double> radii;
  for (int m = 0; m < 20; ++m) radii.push_back(0.1 + 0.8 * m / 19.0);
  const MonotonicityResult r = monotonicity_J(u1, u2, {0.0, 0.0}, radii);
  const double target = std::numbers::pi * std::numbers::pi / 4;
  const double M = 0.1 / h;
  for (const auto& s : r.samples) {
    CHECK(std::abs(s.J - target) <= 10.0 * target / (M * M));
    CHECK(s.J == doctest::Approx(std::pow(s.R, -4) * s.energy1 * s.energy2));
    CHECK(s.t1 == doctest::Approx(1.0).epsilon(0.01));
  }
  CHECK(r.monotone);
}

TEST_CASE("J errors") {
  const Grid2D g = make_grid({-1, -1, 1, 1}, 1.0 / 64);
  const ScalarField u = sample_field(g, [](Point p) { return std::max(0.0, p.y); });
  const std::vector<double> radii{0.2, 0.4};
  require_code(ErrorCode::OverlappingSupports, [&] { monotonicity_J(u, u, {0.0, 0.0}, radii); });
  const ScalarField v = sample_field(g, [](Point p) { return std::max(0.0, -p.y); });
  require_code(ErrorCode::CenterNotOnBothBoundaries, [&] { monotonicity_J(u, v, {0.0, 0.5}, radii); });
  require_code(ErrorCode::GridMismatch,
               [&] { monotonicity_J(u, ScalarField(make_grid({-1, -1, 1, 1}, 1.0 / 32)), {0.0, 0.0}, radii); });
}

TEST_CASE("arc eigenvalue table is exact") {
  const std::vector<Rational> alphas{{1, 2}, {1, 4}, {1, 8}};
  const auto rows = arc_eigenvalue_bound(alphas, 400);
  CHECK(rows[0].bound.num == 2);
  CHECK(rows[0].bound.den == 1);
  CHECK(rows[1].bound.num == 8);
  CHECK(rows[1].bound.den == 3);
  for (const auto& r : rows) {
    CHECK(r.rel_error <= 1.0 / (400.0 * 400.0));
    CHECK(r.bound_value >= 2.0);
  }
  require_code(ErrorCode::AlphaOutOfRange, [] { arc_eigenvalue_bound(std::vector<Rational>{{1, 1}}); });
  require_code(ErrorCode::AlphaOutOfRange, [] { arc_eigenvalue_bound(std::vector<Rational>{{0, 3}}); });
}

TEST_CASE("exclusion probe: one component on the circle, two on planted wedges") {
  const Solution a = exact_benchmark(1.0 / 64), b = exact_benchmark(1.0 / 128);
  const std::vector<double> eps{0.5, 0.25, 0.125};
  const ExclusionProbe one = two_component_exclusion_probe({&a, &b}, {kR, 0.0}, eps, 0.3);
  CHECK(!one.finding);
  for (const auto& l : one.levels) {
    for (std::size_t c : l.counts) CHECK(c == 1);
  }

  // Two cones {|y| > 0.5 |x|} meeting at the origin, zero wedge between them.
  auto wedges = [](double h) {
    return with_mask(sample_field(make_grid({-1, -1, 1, 1}, h),
                                  [](Point p) { return std::max(0.0, std::abs(p.y) - 0.5 * std::abs(p.x)); }));
  };
  const Solution c = wedges(1.0 / 64), d = wedges(1.0 / 128);
  const ExclusionProbe two = two_component_exclusion_probe({&c, &d}, {0.0, 0.0}, eps, 0.5);
  CHECK(two.finding);
  for (const auto& l : two.levels) {
    for (std::size_t n : l.counts) CHECK(n == 2);
    REQUIRE(!l.t1.empty());
    for (std::size_t m = 0; m < l.t1.size(); ++m) CHECK(l.t1[m] + l.t2[m] < 2.0 - 0.2);
  }
  CHECK(exclusion_record("x", {two}).verdict == Verdict::Finding);
  require_code(ErrorCode::WindowOutsideGrid, [&] { two_component_exclusion_probe({&c}, {0.9, 0.0}, eps, 0.5); });
}

TEST_CASE("report summary and determinism") {
  std::vector<CheckRecord> recs(3);
  recs[0].name = "c";
  recs[1].name = "a";
  recs[2].name = "b";
  const VerificationReport r = assemble_report(recs, Environment{{0.1}, "abc", {}});
  CHECK(r.pass == 3);
  CHECK(r.fail == 0);
  CHECK(r.finding == 0);
  CHECK(r.checks.front().name == "a");
  CHECK(r.to_json()["summary"]["pass"] == 3);
  CHECK(r.dump() == assemble_report(recs, Environment{{0.1}, "abc", {}}).dump());
  require_code(ErrorCode::InvalidUsage, [] { assemble_report({}, Environment{}); });
}

TEST_CASE("spec hash depends on the data") {
  CHECK(spec_hash(radial_spec(2.0)) == spec_hash(radial_spec(2.0)));
  CHECK(spec_hash(radial_spec(2.0)) != spec_hash(radial_spec(2.5)));
  CHECK(spec_hash(radial_spec(2.0)) != spec_hash(modulated_spec()));
}

TEST_CASE("battery on the exact benchmark profile") {
  const Solution a = exact_benchmark(1.0 / 64), b = exact_benchmark(1.0 / 128);
  BatteryOptions opt;
  opt.radial_oracle = true;
  opt.checks = {"fb_radius", "lipschitz", "nondegeneracy", "laplacian_mass", "density", "zero_audit",
                "two_component_exclusion", "green_identity"};
  for (const auto& rec : run_battery(radial_spec(2.0), {&a, &b}, opt, SolverParams{})) {
    CHECK_MESSAGE(rec.verdict == Verdict::Pass, rec.name, ": ", rec.detail);
  }
}

TEST_CASE("battery reports checks that cannot run") {
  const ProblemSpec spec = radial_spec(2.0);
  const Solution z = with_mask(ScalarField(make_grid(spec.rect, 0.125)));
  BatteryOptions opt;
  opt.checks = {"lipschitz"};
  const auto recs = run_battery(spec, {&z}, opt, SolverParams{});
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].verdict == Verdict::Fail);
  CHECK(recs[0].detail.find("EMPTY_POSITIVITY_SET") != std::string::npos);
  opt.checks = {"nope"};
  require_code(ErrorCode::InvalidUsage, [&] { run_battery(spec, {&z}, opt, SolverParams{}); });
}
