#include <algorithm>
#include <array>
#include <cmath>

#include "fbp/error.hpp"
#include "fbp/free_boundary.hpp"
#include "fbp/geometry.hpp"
#include "fbp/operators.hpp"
#include "fbp/solver.hpp"

namespace fbp {

namespace {

// Largest u / <x - x0, ν> over positive nodes in the 45° cone around ν.
double cone_slope(const ScalarField& u, std::span<const std::uint8_t> positive, Point x0, Point nu, double rho) {
  const Grid2D& g = u.grid();
  const double h = g.h();
  const auto [ci, cj] = g.coords(x0);
  const int reach = static_cast<int>(std::ceil(rho / h)) + 1;
  double best = 0.0;
  for (int j = static_cast<int>(cj) - reach; j <= static_cast<int>(cj) + reach + 1; ++j) {
    for (int i = static_cast<int>(ci) - reach; i <= static_cast<int>(ci) + reach + 1; ++i) {
      if (!g.contains(i, j)) continue;
      const std::size_t k = g.index(i, j);
      if (!positive[k]) continue;
      const Point d = g.node(k) - x0;
      const double r = norm(d);
      const double along = dot(d, nu);
      if (r > rho || r == 0.0 || along < r * std::sqrt(0.5)) continue;
      best = std::max(best, u[k] / along);
    }
  }
  return best;
}

}  // namespace

ViscosityReport check_viscosity_subsolution(const Solution& sol, const ProblemSpec& spec, double tol,
                                            std::size_t max_points) {
  if (sol.boundary.empty()) throw Error(ErrorCode::EmptyFreeBoundary, "solution has no free-boundary points");
  const ScalarField& u = sol.u;
  const Grid2D& g = u.grid();
  const double h = g.h();
  ViscosityReport out;
  out.tol = tol;

  std::vector<std::size_t> picks;
  const std::size_t n = sol.boundary.size();
  if (max_points == 0 || max_points >= n) {
    for (std::size_t m = 0; m < n; ++m) picks.push_back(m);
  } else {
    for (std::size_t m = 0; m < max_points; ++m) picks.push_back(m * n / max_points);
  }

  const std::array<double, 3> rhos{4.0 * h, 8.0 * h, 16.0 * h};
  const std::array<double, 1> contact{4.0 * h};
  const TangentBallFinder finder(g, sol.positive, Side::Exterior);
  for (std::size_t m : picks) {
    const Point p = sol.boundary[m].p;
    ++out.points;
    std::vector<TangentBallRecord> ball;
    try {
      ball = finder.find(p, contact);
    } catch (const Error&) {
      continue;
    }
    if (!ball[0].found) continue;
    const Point d = p - ball[0].center;
    if (norm(d) == 0.0) continue;
    const Point nu = (1.0 / norm(d)) * d;
    ++out.tested;
    // Least-squares line through (ρ, α(ρ)), read at ρ = 0.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (double rho : rhos) {
      const double a = cone_slope(u, sol.positive, p, nu, rho);
      sx += rho;
      sy += a;
      sxx += rho * rho;
      sxy += rho * a;
    }
    const double k = static_cast<double>(rhos.size());
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    const double alpha = (sy - slope * sx) / k;
    const double need = std::sqrt(spec.f(p));
    if (alpha < need - tol) out.violations.push_back({p, alpha, need});
  }

  const auto in_D = disk_mask(g, spec.D);
  out.min_laplacian = INFINITY;
  for (int j = 1; j + 1 < g.ny(); ++j) {
    for (int i = 1; i + 1 < g.nx(); ++i) {
      const std::size_t k = g.index(i, j);
      if (!sol.positive[k] || in_D[k]) continue;
      bool skip = false;
      for (int d = 0; d < 4; ++d) skip = skip || in_D[g.index(i + kDi[d], j + kDj[d])];
      if (skip) continue;
      const double lap = (u(i + 1, j) + u(i - 1, j) + u(i, j + 1) + u(i, j - 1) - 4.0 * u(i, j)) / (h * h);
      ++out.subharmonic_nodes;
      out.min_laplacian = std::min(out.min_laplacian, lap);
      if (lap < -tol) ++out.subharmonic_violations;
    }
  }
  if (out.subharmonic_nodes == 0) out.min_laplacian = 0.0;
  return out;
}

}  // namespace fbp
