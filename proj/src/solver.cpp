#include "fbp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <unordered_map>

#include "fbp/error.hpp"
#include "fbp/free_boundary.hpp"
#include "fbp/operators.hpp"
#include "solver_internal.hpp"

namespace fbp {

namespace {

// Fraction t in (0, 1] along the arm from p (outside D) towards a node inside
// D where the arm meets the circle.
double circle_fraction(Point p, Point dir, double h, const Disk& D) {
  const Point q = p - D.center;
  const double b = dot(q, dir);
  const double c = dot(q, q) - D.radius * D.radius;
  const double disc = std::max(0.0, b * b - c);
  const double s = -b - std::sqrt(disc);
  return std::clamp(s / h, 0.0, 1.0);
}

// Spatial hash of points by nearest node.
class PointIndex {
 public:
  PointIndex(const Grid2D& g, const std::vector<Point>& pts) : g_(g), pts_(pts) {
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const auto [i, j] = g.nearest(pts[k]);
      buckets_[g.index(i, j)].push_back(k);
    }
  }

  template <typename Fn>
  void near(Point p, double radius, Fn&& fn) const {
    const auto [ci, cj] = g_.nearest(p);
    const int reach = static_cast<int>(std::ceil(radius / g_.h())) + 1;
    for (int j = cj - reach; j <= cj + reach; ++j) {
      for (int i = ci - reach; i <= ci + reach; ++i) {
        if (!g_.contains(i, j)) continue;
        auto it = buckets_.find(g_.index(i, j));
        if (it == buckets_.end()) continue;
        for (std::size_t k : it->second) {
          const double d = distance(pts_[k], p);
          if (d <= radius) fn(k, d);
        }
      }
    }
  }

 private:
  const Grid2D& g_;
  const std::vector<Point>& pts_;
  std::unordered_map<std::size_t, std::vector<std::size_t>> buckets_;
};

struct FrontState {
  std::vector<Point> crossings;
  std::vector<FreeBoundaryPoint> boundary;
  std::vector<std::uint8_t> positive;
  double max_mismatch = 0.0;
  int sweeps = 0;
};

class LevelSetSolver {
 public:
  LevelSetSolver(const ProblemSpec& spec, const Grid2D& grid, const SolverParams& params,
                 const ScalarField* start = nullptr)
      : spec_(spec), g_(grid), p_(params), u_(grid), in_D_(disk_mask(grid, spec.D)) {
    gmax_ = g_max(spec);
    barrier_ = spec_barrier(spec);
    theta_ = 1e-12 * gmax_;
    tol_ = params.tol > 0.0 ? params.tol : 1e-8 * gmax_;
    env_.resize(g_.size());
    core_.resize(g_.size());
    phi_.resize(g_.size());
    for (std::size_t k = 0; k < g_.size(); ++k) {
      const Point x = g_.node(k);
      env_[k] = distance(x, barrier_.center) - barrier_.R0;
      core_[k] = distance(x, spec.D.center) - spec.D.radius - g_.h();
      phi_[k] = clamp_phi(k, start ? start->sample(x) : env_[k]);
      if (in_D_[k]) u_[k] = spec.g(spec.D.project(x));
    }
  }

  Solution run() {
    const double h = g_.h();
    Solution sol(u_);
    sol.method = "trial_free_boundary";
    bool converged = false;
    FrontState st;
    double inner = 1e-6 * gmax_;
    for (int it = 1; it <= p_.max_iterations; ++it) {
      st = solve_front(std::max(tol_, inner));
      // Solve only as accurately as the current mismatch warrants.
      inner = std::clamp(1e-3 * st.max_mismatch, 1e-6, 1e-3) * gmax_;
      IterationRecord rec;
      rec.iteration = it;
      rec.max_mismatch = st.max_mismatch;
      rec.inner_sweeps = st.sweeps;
      rec.inside_envelope = inside_envelope();
      if (st.boundary.empty() || st.max_mismatch <= p_.fbc_tol) {
        sol.log.push_back(rec);
        converged = true;
        break;
      }
      const std::vector<double> move = front_velocity(st);
      double max_move = 0.0;
      for (double d : move) max_move = std::max(max_move, std::abs(d));
      rec.max_move = max_move;
      if (max_move < p_.move_tol * h) {
        sol.log.push_back(rec);
        converged = true;
        break;
      }
      const std::vector<double> before = phi_;
      advance(st, move);
      for (std::size_t k = 0; k < g_.size(); ++k) {
        if (before[k] >= 0.0 && phi_[k] < 0.0) ++rec.added;
        if (before[k] < 0.0 && phi_[k] >= 0.0) ++rec.removed;
      }
      sol.log.push_back(rec);
    }
    st = solve_front(tol_);
    sol.u = u_;
    sol.positive = st.positive;
    sol.boundary = st.boundary;
    sol.max_mismatch = st.max_mismatch;
    sol.converged = converged;
    return sol;
  }

  ScalarField level_set() const {
    ScalarField out(g_);
    out.mutable_values() = phi_;
    return out;
  }

 private:
  double clamp_phi(std::size_t k, double v) const {
    v = std::max(v, env_[k]);
    if (core_[k] < env_[k]) v = std::min(v, core_[k]);
    return v;
  }

  bool unknown(std::size_t k) const { return !in_D_[k] && phi_[k] < 0.0 && !g_.on_edge(g_.i_of(k), g_.j_of(k)); }

  bool inside_envelope() const {
    for (std::size_t k = 0; k < g_.size(); ++k) {
      if (unknown(k) && env_[k] >= 0.0) return false;
    }
    return true;
  }

  FrontState solve_front(double tol) {
    const double h = g_.h();
    FrontState st;
    for (std::size_t k = 0; k < g_.size(); ++k) {
      const bool unk = unknown(k);
      u_.set_tag(k, unk ? NodeTag::Interior : NodeTag::Dirichlet);
      if (!unk && !in_D_[k]) u_[k] = 0.0;
    }
    LaplaceSystem sys(u_);
    for (std::size_t k = 0; k < g_.size(); ++k) {
      if (!unknown(k)) continue;
      const int i = g_.i_of(k);
      const int j = g_.j_of(k);
      const Point x = g_.node(i, j);
      for (int d = 0; d < 4; ++d) {
        const std::size_t n = g_.index(i + kDi[d], j + kDj[d]);
        const Point dir{static_cast<double>(kDi[d]), static_cast<double>(kDj[d])};
        if (in_D_[n]) {
          const double t = circle_fraction(x, dir, h, spec_.D);
          sys.add_cut(k, d, t, spec_.g(x + (t * h) * dir));
        } else if (!unknown(n)) {
          const double t = phi_[n] > phi_[k] ? phi_[k] / (phi_[k] - phi_[n]) : 1.0;
          sys.add_cut(k, d, t, 0.0);
          st.crossings.push_back(x + (std::clamp(t, 0.0, 1.0) * h) * dir);
        }
      }
    }
    const SolveStats stats = sys.solve(u_, tol, p_.max_sweeps);
    st.sweeps = stats.sweeps;
    st.positive.assign(g_.size(), 0);
    for (std::size_t k = 0; k < g_.size(); ++k) {
      if (in_D_[k]) {
        st.positive[k] = u_[k] > theta_;
      } else if (unknown(k)) {
        u_[k] = std::max(u_[k], 0.0);
        st.positive[k] = u_[k] > theta_;
      }
    }
    st.boundary = boundary_fluxes(u_, st.positive, in_D_, st.crossings);
    for (const auto& b : st.boundary) {
      st.max_mismatch = std::max(st.max_mismatch, std::abs(b.flux * b.flux - spec_.f(b.p)));
    }
    return st;
  }

  // Outward normal displacement per crossing.
  std::vector<double> front_velocity(const FrontState& st) const {
    const double h = g_.h();
    const std::size_t n = st.boundary.size();
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = st.boundary[k].flux / std::sqrt(spec_.f(st.boundary[k].p)) - 1.0;
    std::vector<double> move(n);
    for (std::size_t k = 0; k < n; ++k) move[k] = p_.local_gain * h * v[k];
    PointIndex index(g_, st.crossings);
    for (double ell = p_.smooth_scale; ell >= 3.0 * h; ell /= 3.0) {
      const double cut = 3.0 * ell;
      for (std::size_t k = 0; k < n; ++k) {
        double sw = 0.0;
        double s = 0.0;
        auto add = [&](std::size_t m, double d) {
          const double w = std::exp(-(d * d) / (ell * ell));
          sw += w;
          s += w * v[m];
        };
        if (cut > 12.0 * h) {
          for (std::size_t m = 0; m < n; ++m) add(m, distance(st.crossings[m], st.crossings[k]));
        } else {
          index.near(st.crossings[k], cut, add);
        }
        move[k] += p_.smooth_gain * ell * s / sw;
      }
    }
    const double cap = p_.move_fraction * h;
    for (double& d : move) d = std::clamp(d, -cap, cap);
    return move;
  }

  void advance(const FrontState& st, const std::vector<double>& move) {
    const double h = g_.h();
    PointIndex index(g_, st.crossings);
    const double reach = 4.0 * h;
    std::vector<double> next = phi_;
    for (std::size_t k = 0; k < g_.size(); ++k) {
      if (std::abs(phi_[k]) > 3.0 * h) continue;
      double sw = 0.0;
      double s = 0.0;
      index.near(g_.node(k), reach, [&](std::size_t m, double d) {
        const double w = std::exp(-(d * d) / (2.25 * h * h));
        sw += w;
        s += w * move[m];
      });
      if (sw > 0.0) next[k] = phi_[k] - s / sw;
    }
    phi_ = std::move(next);
    reinitialise();
  }

  void reinitialise() {
    const double h = g_.h();
    const double band = 6.0 * h;
    const auto segs = contour_segments(g_, phi_);
    std::vector<double> dist(g_.size(), band);
    for (const Segment& s : segs) {
      const double x0 = std::min(s.a.x, s.b.x) - band;
      const double x1 = std::max(s.a.x, s.b.x) + band;
      const double y0 = std::min(s.a.y, s.b.y) - band;
      const double y1 = std::max(s.a.y, s.b.y) + band;
      const auto [ia, ja] = g_.coords({x0, y0});
      const auto [ib, jb] = g_.coords({x1, y1});
      const Point ab = s.b - s.a;
      const double len2 = dot(ab, ab);
      for (int j = std::max(0, static_cast<int>(std::ceil(ja))); j <= std::min(g_.ny() - 1, static_cast<int>(jb)); ++j) {
        for (int i = std::max(0, static_cast<int>(std::ceil(ia))); i <= std::min(g_.nx() - 1, static_cast<int>(ib));
             ++i) {
          const Point x = g_.node(i, j);
          const double t = len2 > 0.0 ? std::clamp(dot(x - s.a, ab) / len2, 0.0, 1.0) : 0.0;
          const double d = distance(x, s.a + t * ab);
          double& cur = dist[g_.index(i, j)];
          cur = std::min(cur, d);
        }
      }
    }
    // Nodes next to the front keep their values so the zero set does not
    // drift with every re-initialisation.
    for (std::size_t k = 0; k < g_.size(); ++k) {
      const double signed_d = phi_[k] < 0.0 ? -dist[k] : dist[k];
      phi_[k] = clamp_phi(k, dist[k] < keep_band_ * h ? phi_[k] : signed_d);
    }
  }

  const ProblemSpec& spec_;
  const Grid2D g_;
  const SolverParams p_;
  ScalarField u_;
  std::vector<std::uint8_t> in_D_;
  std::vector<double> env_;
  std::vector<double> core_;
  std::vector<double> phi_;
  SupersolutionBarrier barrier_;
  double gmax_ = 0.0;
  double theta_ = 0.0;
  double tol_ = 0.0;
  double keep_band_ = 1.5;
};

// Runs the solver on grid and returns it for its level set, itself started
// from the next coarser grid when that is still finer than coarse_h.
LevelSetSolver coarse_chain(const ProblemSpec& spec, const Grid2D& grid, const SolverParams& params) {
  std::optional<ScalarField> start;
  if (grid.h() < params.coarse_h) {
    LevelSetSolver pre = coarse_chain(spec, make_grid(grid.bounds(), 2.0 * grid.h()), params);
    start = pre.level_set();
  }
  LevelSetSolver s(spec, grid, params, start ? &*start : nullptr);
  s.run();
  return s;
}

}  // namespace

Solution empty_solution(const ProblemSpec& spec, const Grid2D& grid, const std::string& method) {
  ScalarField u(grid);
  const auto in_D = disk_mask(grid, spec.D);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (in_D[k]) {
      u.set_tag(k, NodeTag::Dirichlet);
      u[k] = spec.g(spec.D.project(grid.node(k)));
    }
  }
  u.tag_edges_dirichlet();
  Solution sol(u);
  sol.positive.assign(grid.size(), 0);
  sol.converged = true;
  sol.method = method;
  return sol;
}

void check_grid_covers(const ProblemSpec& spec, const Grid2D& grid) {
  const Rect b = grid.bounds();
  const double slack = 1e-9 * grid.h();
  if (b.x0 > spec.rect.x0 + slack || b.y0 > spec.rect.y0 + slack || b.x1 < spec.rect.x1 - slack ||
      b.y1 < spec.rect.y1 - slack) {
    throw Error(ErrorCode::SpecInvalid, "grid does not cover the spec rectangle");
  }
}

Solution solve_largest_subsolution(const ProblemSpec& spec, const Grid2D& grid, const SolverParams& params) {
  validate_spec(spec);
  check_grid_covers(spec, grid);
  if (g_max(spec) <= 0.0) return empty_solution(spec, grid, "trial_free_boundary");
  // Fine grids start from the front found on the grid with twice the spacing.
  std::optional<ScalarField> start;
  if (params.coarse_start && grid.h() < params.coarse_h) {
    const Rect b = grid.bounds();
    const Grid2D coarse = make_grid(b, 2.0 * grid.h());
    LevelSetSolver pre = coarse_chain(spec, coarse, params);
    start = pre.level_set();
  }
  return LevelSetSolver(spec, grid, params, start ? &*start : nullptr).run();
}

ResidualSummary fbc_residual(const Solution& sol, const ProblemSpec& spec) {
  if (sol.boundary.empty()) throw Error(ErrorCode::EmptyFreeBoundary, "solution has no free-boundary points");
  const auto in_D = disk_mask(sol.u.grid(), spec.D);
  ResidualSummary out;
  double sum = 0.0;
  double sum2 = 0.0;
  for (const auto& b : sol.boundary) {
    const auto flux = one_sided_flux(sol.u, sol.positive, in_D, b.p);
    if (!flux) {
      ++out.skipped;
      continue;
    }
    const double r = *flux * *flux - spec.f(b.p);
    out.residuals.push_back(r);
    out.max_abs = std::max(out.max_abs, std::abs(r));
    sum += r;
    sum2 += r * r;
  }
  if (out.residuals.empty()) throw Error(ErrorCode::EmptyFreeBoundary, "no free-boundary point admits a fit");
  const double n = static_cast<double>(out.residuals.size());
  out.mean = sum / n;
  out.l2 = std::sqrt(sum2 / n);
  return out;
}

ComparisonVerdict comparison_check(const ScalarField& v, const ScalarField& w, double tol) {
  if (!v.grid().same_as(w.grid())) throw Error(ErrorCode::GridMismatch, "comparison needs identical grids");
  ComparisonVerdict out;
  out.excess = -INFINITY;
  for (std::size_t k = 0; k < v.grid().size(); ++k) {
    const double e = v[k] - w[k];
    if (e > out.excess) {
      out.excess = e;
      out.worst = k;
    }
  }
  out.holds = out.excess <= tol;
  out.where = v.grid().node(out.worst);
  return out;
}

ScalarField barrier_field(const ProblemSpec& spec, const Grid2D& grid) {
  const auto b = spec_barrier(spec);
  const auto in_D = disk_mask(grid, spec.D);
  ScalarField out = sample_field(grid, [&](Point p) { return b(p); });
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (in_D[k]) {
      out[k] = b.g_max;
      out.set_tag(k, NodeTag::Dirichlet);
    }
  }
  return out;
}

ScalarField radial_field(const RadialSolution& w, const Disk& D, const Grid2D& grid) {
  ScalarField out = sample_field(grid, [&](Point p) { return D.contains(p) ? w.g0 : w(p); });
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (D.contains(grid.node(k))) out.set_tag(k, NodeTag::Dirichlet);
  }
  return out;
}

}  // namespace fbp
