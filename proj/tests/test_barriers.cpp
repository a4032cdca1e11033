#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "support.hpp"

#include "fbp/barriers.hpp"
#include "fbp/kernels.hpp"
#include "fbp/operators.hpp"

using namespace fbp;

// Roots of R ln(R/r) = g0/sqrt(f0), bisected to 1e-15 offline.
constexpr double kR_f2 = 1.5692542646770047;
constexpr double kR_f25 = 1.5171898589040431;
constexpr double kR_f15 = 1.6434729929886247;
constexpr double kR0_lambda1 = 1.7632228343518968;

TEST_CASE("radial root matches the bisection oracle") {
  CHECK(radial_solution(1.0, 1.0, 2.0).R == doctest::Approx(kR_f2).epsilon(1e-10));
  CHECK(radial_solution(1.0, 1.0, 2.5).R == doctest::Approx(kR_f25).epsilon(1e-10));
  CHECK(radial_solution(1.0, 1.0, 1.5).R == doctest::Approx(kR_f15).epsilon(1e-10));
}

TEST_CASE("radial solution is self consistent") {
  for (double f0 : {1.5, 2.0, 2.5}) {
    const RadialSolution w = radial_solution(1.0, 1.0, f0);
    CHECK(std::abs(w.flux_squared() - f0) <= 1e-10);
    CHECK(w({1.0, 0.0}) == doctest::Approx(1.0));
    CHECK(w({w.R, 0.0}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(w({2.0 * w.R, 0.0}) == 0.0);
  }
  // Slope at the inner radius: 1/ln R.
  CHECK(radial_solution(1.0, 1.0, 2.0).slope(1.0) == doctest::Approx(1.0 / std::log(kR_f2)).epsilon(1e-12));
}

TEST_CASE("radial solution rejects bad input") {
  require_code(ErrorCode::SpecInvalid, [] { radial_solution(1.0, 0.0, 2.0); });
  require_code(ErrorCode::SpecInvalid, [] { radial_solution(-1.0, 1.0, 2.0); });
  // A large g0 pushes the root past 50 r_in.
  require_code(ErrorCode::NoRootInBracket, [] { radial_solution(1.0, 1e6, 1.0); });
}

TEST_CASE("supersolution barrier radius") {
  CHECK(supersolution_barrier(1.0, 2.0).R0 == doctest::Approx(kR_f2).epsilon(1e-10));
  CHECK(supersolution_barrier(1.0, 1.0).R0 == doctest::Approx(kR0_lambda1).epsilon(1e-10));
  const SupersolutionBarrier b = supersolution_barrier(1.0, 2.0);
  CHECK(b({b.R0, 0.0}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(b({0.0, 3.0}) == 0.0);
}

TEST_CASE("radial benchmark sits below the barrier") {
  const RadialSolution w = radial_solution(1.0, 1.0, 2.0);
  const SupersolutionBarrier b = supersolution_barrier(1.0, 2.0);
  for (int k = 0; k <= 200; ++k) {
    const double r = 1.0 + k * 0.005;
    const Point p{r * std::cos(0.3 * k), r * std::sin(0.3 * k)};
    CHECK(w(p) <= b(p) + 1e-12);
  }
}

TEST_CASE("sector harmonic") {
  const SectorHarmonic half = sector_harmonic(2.0);
  for (double r : {0.1, 0.5, 2.0}) {
    CHECK(std::abs(half.eval(r, -std::numbers::pi / 2)) == doctest::Approx(r).epsilon(1e-12));
    CHECK(half({r, -0.5 * r}) == doctest::Approx(0.5 * r).epsilon(1e-12));
  }
  for (double alpha : {1.0, 2.0, 4.0, 4.0 / 3.0}) {
    const SectorHarmonic s = sector_harmonic(alpha);
    for (double r : {0.3, 1.0, 1.7}) CHECK(std::abs(s.eval(r, 2 * std::numbers::pi / alpha)) <= 1e-12);
  }
  require_code(ErrorCode::AlphaOutOfRange, [] { sector_harmonic(0.5); });
}

TEST_CASE("sector harmonic is discretely harmonic at second order") {
  // Annular sector 0.5 < r < 1, -π/4 < θ < 0 inside the α = 4 sector.
  const SectorHarmonic s = sector_harmonic(4.0);
  std::vector<double> res;
  for (double h : {0.02, 0.01}) {
    const ScalarField u = sample_field(make_grid({-1.2, -1.2, 1.2, 1.2}, h), [&](Point p) { return s(p); });
    const ScalarField L = discrete_laplacian(u);
    double worst = 0.0;
    for (std::size_t k = 0; k < u.grid().size(); ++k) {
      const Point p = u.grid().node(k);
      const double r = norm(p), t = std::atan2(p.y, p.x);
      if (r > 0.5 && r < 1.0 && t > -std::numbers::pi / 4 + 0.1 && t < -0.1) worst = std::max(worst, std::abs(L[k]));
    }
    res.push_back(worst);
  }
  // α = 4 gives r^2 cos(2θ + π/2), a quadratic: the stencil is exact.
  CHECK(res[1] <= 1e-8);
  const SectorHarmonic q = sector_harmonic(4.0 / 3.0);
  std::vector<double> rq;
  for (double h : {0.02, 0.01}) {
    const ScalarField u = sample_field(make_grid({-1.2, -1.2, 1.2, 1.2}, h), [&](Point p) { return q(p); });
    const ScalarField L = discrete_laplacian(u);
    double worst = 0.0;
    for (std::size_t k = 0; k < u.grid().size(); ++k) {
      const Point p = u.grid().node(k);
      const double r = norm(p), t = std::atan2(p.y, p.x);
      if (r > 0.5 && r < 1.0 && t > -2.5 && t < -0.5) worst = std::max(worst, std::abs(L[k]));
    }
    rq.push_back(worst);
  }
  CHECK(std::log2(rq[0] / rq[1]) >= 1.8);
}

TEST_CASE("single-plane slope bound grows like |ln δ|") {
  const std::vector<double> deltas{0.2, 0.1, 0.05, 0.025};
  std::vector<double> v, c;
  for (double d : deltas) {
    v.push_back(planar_barrier_slope_bound(PlaneKind::SinglePlane, d).value);
    c.push_back(v.back() / std::abs(std::log(d)));
  }
  for (std::size_t k = 1; k < v.size(); ++k) CHECK(v[k] > v[k - 1]);
  // bound / |ln δ| settles near 0.295 rather than drifting to 0.
  const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
  CHECK(*lo > 0.25);
  CHECK(*hi / *lo < 1.1);
}

TEST_CASE("two-plane slope bound doubles when δ halves" * doctest::should_fail()) {
  // The oracle grows only logarithmically in 1/δ; this expectation does not hold.
  const double a = planar_barrier_slope_bound(PlaneKind::TwoPlanes, 0.1).value;
  const double b = planar_barrier_slope_bound(PlaneKind::TwoPlanes, 0.05).value;
  CHECK(b >= 1.5 * a);
}

TEST_CASE("two-plane slope bound increases as δ shrinks") {
  std::vector<double> v;
  for (double d : {0.2, 0.1, 0.05, 0.025}) v.push_back(planar_barrier_slope_bound(PlaneKind::TwoPlanes, d).value);
  for (std::size_t k = 1; k < v.size(); ++k) CHECK(v[k] > v[k - 1]);
}

TEST_CASE("slope bound range") {
  require_code(ErrorCode::DeltaOutOfRange, [] { planar_barrier_slope_bound(PlaneKind::SinglePlane, 0.6); });
  require_code(ErrorCode::DeltaOutOfRange, [] { planar_barrier_slope_bound(PlaneKind::TwoPlanes, 0.0); });
}

TEST_CASE("poisson extension") {
  CHECK(poisson_disk_eval([](double) { return 1.0; }, 256, {0.3, -0.2}) == doctest::Approx(1.0).epsilon(1e-12));
  // cos θ extends to x.
  CHECK(poisson_disk_eval([](double t) { return std::cos(t); }, 512, {0.4, 0.1}) ==
        doctest::Approx(0.4).epsilon(1e-10));
  require_code(ErrorCode::PointNotInterior, [] { poisson_disk_eval([](double) { return 1.0; }, 64, {1.0, 0.0}); });
}

TEST_CASE("green function of a disk") {
  const GreenDisk g{{0.5, 0.5}, 0.25};
  const GreenEval e = green_value_and_flux(g, {0.5, 0.6}, 32);
  CHECK(e.value == doctest::Approx(std::log(0.1 / 0.25) / (2 * std::numbers::pi)));
  const GreenEval c = green_value_and_flux(g, {0.5, 0.75}, 16);
  CHECK(std::abs(c.value) <= 1e-15);
  require_code(ErrorCode::PoleEvaluation, [&] { green_value_and_flux(g, g.center); });
}

TEST_CASE("log integral over a rectangle") {
  // Midpoint rule on a fine grid, away from the singularity.
  const double exact = log_integral_rect(0.5, 1.5, -0.25, 0.75);
  double sum = 0.0;
  const int n = 400;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = 0.5 + (i + 0.5) / n, y = -0.25 + (j + 0.5) / n;
      sum += 0.5 * std::log(x * x + y * y);
    }
  }
  CHECK(exact == doctest::Approx(sum / (n * n)).epsilon(1e-6));
  CHECK(std::isfinite(log_integral_rect(-0.1, 0.1, -0.1, 0.1)));
}

TEST_CASE("green identity on harmonic and quadratic fields") {
  const Grid2D g = make_grid({-1, -1, 1, 1}, 1.0 / 128);
  const ScalarField a = sample_field(g, [](Point p) { return p.x * p.x - p.y * p.y + p.x; });
  CHECK(green_identity_residual(a, {0.1, -0.05}, 0.4) <= 1e-3);
  const ScalarField b = sample_field(g, [](Point p) { return p.x * p.x + p.y * p.y; });
  CHECK(green_identity_residual(b, {0.0, 0.0}, 0.5) <= 5.0 / 128);
  require_code(ErrorCode::BallOutsideGrid, [&] { green_identity_residual(a, {0.9, 0.0}, 0.4); });
}
