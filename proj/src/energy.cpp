#include <algorithm>
#include <cmath>
#include <vector>

#include "fbp/error.hpp"
#include "fbp/free_boundary.hpp"
#include "fbp/operators.hpp"
#include "fbp/solver.hpp"
#include "solver_internal.hpp"

namespace fbp {

namespace {

double edge_energy(const ScalarField& u) {
  const Grid2D& g = u.grid();
  double e = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (i + 1 < g.nx()) e += (u(i + 1, j) - u(i, j)) * (u(i + 1, j) - u(i, j));
      if (j + 1 < g.ny()) e += (u(i, j + 1) - u(i, j)) * (u(i, j + 1) - u(i, j));
    }
  }
  return e;
}

class EnergyMinimizer {
 public:
  EnergyMinimizer(const ProblemSpec& spec, const Grid2D& grid, const SolverParams& params)
      : spec_(spec), g_(grid), p_(params), u_(grid), in_D_(disk_mask(grid, spec.D)), set_(grid.size(), 0) {
    gmax_ = g_max(spec);
    tol_ = params.tol > 0.0 ? params.tol : 1e-8 * gmax_;
    f_.resize(g_.size());
    const double reach = spec.D.radius + params.energy_start_cells * g_.h();
    for (std::size_t k = 0; k < g_.size(); ++k) {
      const Point x = g_.node(k);
      f_[k] = spec.f(x);
      if (in_D_[k]) {
        u_[k] = spec.g(spec.D.project(x));
      } else if (!edge(k) && distance(x, spec.D.center) <= reach) {
        set_[k] = 1;
      }
    }
  }

  Solution run() {
    Solution sol(u_);
    sol.method = "energy_minimizer";
    double energy = evaluate(set_, u_);
    bool converged = false;
    for (int it = 1; it <= p_.energy_max_iterations; ++it) {
      IterationRecord rec;
      rec.iteration = it;
      const auto adds = candidates(true);
      const auto removes = candidates(false);
      bool moved = attempt(adds, true, energy, rec);
      if (!moved) moved = attempt(removes, false, energy, rec);
      rec.energy = energy;
      sol.log.push_back(rec);
      if (!moved) {
        converged = true;
        break;
      }
    }
    sol.u = u_;
    sol.positive.assign(g_.size(), 0);
    const double theta = 1e-12 * gmax_;
    for (std::size_t k = 0; k < g_.size(); ++k) sol.positive[k] = u_[k] > theta;
    sol.boundary = extract_free_boundary(sol.u, sol.positive, in_D_);
    for (const auto& b : sol.boundary) {
      sol.max_mismatch = std::max(sol.max_mismatch, std::abs(b.flux * b.flux - spec_.f(b.p)));
    }
    sol.converged = converged;
    return sol;
  }

 private:
  bool edge(std::size_t k) const { return g_.on_edge(g_.i_of(k), g_.j_of(k)); }

  // Nodes on either side of the set boundary, ordered by how strongly the
  // summed edge slopes across the boundary ask for the move (largest first,
  // ties by index). Summing over arms keeps diagonal fronts from stalling.
  std::vector<std::size_t> candidates(bool grow) const {
    const double h = g_.h();
    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t k = 0; k < g_.size(); ++k) {
      if (in_D_[k] || edge(k) || static_cast<bool>(set_[k]) == grow) continue;
      const int i = g_.i_of(k);
      const int j = g_.j_of(k);
      double pull = 0.0;
      bool touches = false;
      for (int d = 0; d < 4; ++d) {
        const std::size_t n = g_.index(i + kDi[d], j + kDj[d]);
        if (in_D_[n] || static_cast<bool>(set_[n]) != grow) continue;
        touches = true;
        const double s = (grow ? u_[n] : u_[k]) / h;
        pull += s * s;
      }
      if (!touches) continue;
      const double score = grow ? pull - f_[k] : f_[k] - pull;
      if (score > 0.0) scored.push_back({-score, k});
    }
    std::sort(scored.begin(), scored.end());
    std::vector<std::size_t> out;
    out.reserve(scored.size());
    for (const auto& s : scored) out.push_back(s.second);
    return out;
  }

  // Applies the leading part of the candidate list, halving it until the
  // energy drops or nothing is left.
  bool attempt(const std::vector<std::size_t>& cand, bool grow, double& energy, IterationRecord& rec) {
    std::size_t take = cand.size();
    while (take > 0) {
      std::vector<std::uint8_t> trial = set_;
      for (std::size_t c = 0; c < take; ++c) trial[cand[c]] = grow ? 1 : 0;
      ScalarField u = u_;
      const double e = evaluate(trial, u, &rec.inner_sweeps);
      if (e < energy - 1e-13 * std::abs(energy)) {
        energy = e;
        set_ = std::move(trial);
        u_ = std::move(u);
        (grow ? rec.added : rec.removed) = take;
        return true;
      }
      take /= 2;
    }
    return false;
  }

  double evaluate(const std::vector<std::uint8_t>& set, ScalarField& u, int* sweeps = nullptr) const {
    for (std::size_t k = 0; k < g_.size(); ++k) {
      if (in_D_[k]) {
        u.set_tag(k, NodeTag::Dirichlet);
      } else if (set[k]) {
        u.set_tag(k, NodeTag::Interior);
      } else {
        u.set_tag(k, NodeTag::Dirichlet);
        u[k] = 0.0;
      }
    }
    const SolveStats st = LaplaceSystem(u).solve(u, tol_, p_.max_sweeps);
    if (sweeps) *sweeps += st.sweeps;
    double area = 0.0;
    for (std::size_t k = 0; k < g_.size(); ++k) {
      if (set[k]) area += f_[k];
    }
    return edge_energy(u) + g_.h() * g_.h() * area;
  }

  const ProblemSpec& spec_;
  const Grid2D g_;
  const SolverParams p_;
  ScalarField u_;
  std::vector<std::uint8_t> in_D_;
  std::vector<std::uint8_t> set_;
  std::vector<double> f_;
  double gmax_ = 0.0;
  double tol_ = 0.0;
};

}  // namespace

Solution ac_energy_minimize(const ProblemSpec& spec, const Grid2D& grid, const SolverParams& params) {
  validate_spec(spec);
  check_grid_covers(spec, grid);
  if (g_max(spec) <= 0.0) return empty_solution(spec, grid, "energy_minimizer");
  return EnergyMinimizer(spec, grid, params).run();
}

double discrete_energy(const Solution& sol, const ProblemSpec& spec) {
  const Grid2D& g = sol.u.grid();
  const auto in_D = disk_mask(g, spec.D);
  double area = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (sol.positive[k] && !in_D[k]) area += spec.f(g.node(k));
  }
  return edge_energy(sol.u) + g.h() * g.h() * area;
}

}  // namespace fbp
