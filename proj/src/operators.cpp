#include "fbp/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <numbers>
#include <string>

#include "fbp/error.hpp"

namespace fbp {

namespace {

bool usable(const ScalarField& u, int i, int j) {
  return u.grid().contains(i, j) && u.tag(i, j) != NodeTag::Outside;
}

std::string where(const Grid2D& g, int i, int j) {
  return "node (" + std::to_string(i) + ", " + std::to_string(j) + ") of " + std::to_string(g.nx()) + "x" +
         std::to_string(g.ny());
}

}  // namespace

ScalarField discrete_laplacian(const ScalarField& u) {
  const Grid2D& g = u.grid();
  ScalarField out(g);
  const double inv = 1.0 / (g.h() * g.h());
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      out.set_tag(i, j, u.tag(i, j));
      if (u.tag(i, j) != NodeTag::Interior) continue;
      for (int d = 0; d < 4; ++d) {
        if (!usable(u, i + kDi[d], j + kDj[d])) {
          throw Error(ErrorCode::MissingNeighbor, "laplacian at " + where(g, i, j));
        }
      }
      out(i, j) = (u(i + 1, j) + u(i - 1, j) + u(i, j + 1) + u(i, j - 1) - 4.0 * u(i, j)) * inv;
    }
  }
  return out;
}

ScalarField gradient_magnitude(const ScalarField& u) {
  const Grid2D& g = u.grid();
  ScalarField out(g);
  const double h = g.h();
  auto axis = [&](int i, int j, int di, int dj) {
    const bool fwd = usable(u, i + di, j + dj);
    const bool bwd = usable(u, i - di, j - dj);
    if (fwd && bwd) return (u(i + di, j + dj) - u(i - di, j - dj)) / (2.0 * h);
    if (fwd) return (u(i + di, j + dj) - u(i, j)) / h;
    if (bwd) return (u(i, j) - u(i - di, j - dj)) / h;
    throw Error(ErrorCode::MissingNeighbor, "gradient at " + where(g, i, j));
  };
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      out.set_tag(i, j, u.tag(i, j));
      if (u.tag(i, j) == NodeTag::Outside) continue;
      out(i, j) = std::hypot(axis(i, j, 1, 0), axis(i, j, 0, 1));
    }
  }
  return out;
}

LaplaceSystem::LaplaceSystem(const ScalarField& layout)
    : grid_(layout.grid()), tags_(layout.tags().begin(), layout.tags().end()), arms_(layout.grid().size()) {}

void LaplaceSystem::add_cut(std::size_t k, int dir, double fraction, double value) {
  arms_[k][dir] = Arm{std::clamp(fraction, 1e-3, 1.0), value, true};
}

namespace {

struct Row {
  std::size_t k;
  std::array<std::ptrdiff_t, 4> nb;  // -1 when the arm is cut
  std::array<double, 4> w;
  double rhs;   // sum of cut contributions
  double diag;  // sum of weights
  double norm;  // residual scale
};

}  // namespace

double LaplaceSystem::residual_at(const ScalarField& u, std::size_t k) const {
  const int i = grid_.i_of(k);
  const int j = grid_.j_of(k);
  const double h = grid_.h();
  const auto& a = arms_[k];
  double s = 0.0;
  double diag = 0.0;
  for (int axis = 0; axis < 2; ++axis) {
    const int d0 = 2 * axis;
    const int d1 = d0 + 1;
    const double hp = a[d0].fraction * h;
    const double hm = a[d1].fraction * h;
    const double vp = a[d0].cut ? a[d0].value : u(i + kDi[d0], j + kDj[d0]);
    const double vm = a[d1].cut ? a[d1].value : u(i + kDi[d1], j + kDj[d1]);
    s += 2.0 / (hp + hm) * ((vp - u[k]) / hp + (vm - u[k]) / hm);
    diag += 2.0 / (hp * hm);
  }
  return s * (4.0 / (h * h)) / diag;
}

SolveStats LaplaceSystem::solve(ScalarField& u, double tol, int max_sweeps, bool throw_on_budget) const {
  if (!u.grid().same_as(grid_)) throw Error(ErrorCode::GridMismatch, "field and system grids differ");
  const double h = grid_.h();
  std::vector<Row> rows;
  std::vector<int> depth(grid_.size(), -1);
  std::deque<std::size_t> queue;
  for (int j = 0; j < grid_.ny(); ++j) {
    for (int i = 0; i < grid_.nx(); ++i) {
      const std::size_t k = grid_.index(i, j);
      if (tags_[k] != NodeTag::Interior) continue;
      Row r{k, {}, {}, 0.0, 0.0, 1.0};
      bool touches_fixed = false;
      const auto& a = arms_[k];
      for (int d = 0; d < 4; ++d) {
        const int opp = d ^ 1;
        const double hd = a[d].fraction * h;
        const double ho = a[opp].fraction * h;
        const double w = 2.0 / (hd * (hd + ho));
        r.w[d] = w;
        r.diag += w;
        if (a[d].cut) {
          r.nb[d] = -1;
          r.rhs += w * a[d].value;
          touches_fixed = true;
          continue;
        }
        const int ii = i + kDi[d];
        const int jj = j + kDj[d];
        if (!grid_.contains(ii, jj) || tags_[grid_.index(ii, jj)] == NodeTag::Outside) {
          throw Error(ErrorCode::OpenBoundary, "unknown region leaks at " + where(grid_, i, j));
        }
        const std::size_t n = grid_.index(ii, jj);
        if (tags_[n] == NodeTag::Dirichlet) {
          r.nb[d] = -1;
          r.rhs += w * u[n];
          touches_fixed = true;
        } else {
          r.nb[d] = static_cast<std::ptrdiff_t>(n);
        }
      }
      if (touches_fixed) {
        depth[k] = 1;
        queue.push_back(k);
      }
      rows.push_back(r);
    }
  }
  SolveStats stats;
  if (rows.empty()) {
    stats.converged = true;
    return stats;
  }
  // An unknown component with no fixed arm has no unique solution.
  int max_depth = 1;
  while (!queue.empty()) {
    const std::size_t k = queue.front();
    queue.pop_front();
    const int i = grid_.i_of(k);
    const int j = grid_.j_of(k);
    for (int d = 0; d < 4; ++d) {
      if (arms_[k][d].cut) continue;
      const std::size_t n = grid_.index(i + kDi[d], j + kDj[d]);
      if (tags_[n] != NodeTag::Interior || depth[n] >= 0) continue;
      depth[n] = depth[k] + 1;
      max_depth = std::max(max_depth, depth[n]);
      queue.push_back(n);
    }
  }
  for (const Row& r : rows) {
    if (depth[r.k] < 0) throw Error(ErrorCode::OpenBoundary, "unknown region has no boundary data");
  }
  // Residuals are reported per unit of the regular diagonal 4/h^2, so rows
  // with short cut arms do not hit a round-off floor.
  const double regular = 4.0 / (h * h);
  for (Row& r : rows) r.norm = regular / r.diag;
  const double omega = 2.0 / (1.0 + std::sin(std::numbers::pi / (2.0 * max_depth + 1.0)));
  stats.omega = omega;
  std::vector<double>& v = u.mutable_values();
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    double worst = 0.0;
    for (const Row& r : rows) {
      double s = r.rhs;
      for (int d = 0; d < 4; ++d) {
        if (r.nb[d] >= 0) s += r.w[d] * v[static_cast<std::size_t>(r.nb[d])];
      }
      const double res = s - r.diag * v[r.k];
      worst = std::max(worst, std::abs(res) * r.norm);
      v[r.k] += omega * res / r.diag;
    }
    stats.sweeps = sweep;
    stats.residual = worst;
    if (worst <= tol) {
      // Pre-update residuals lag one sweep; confirm on the final state.
      double post = 0.0;
      for (const Row& r : rows) {
        double s = r.rhs - r.diag * v[r.k];
        for (int d = 0; d < 4; ++d) {
          if (r.nb[d] >= 0) s += r.w[d] * v[static_cast<std::size_t>(r.nb[d])];
        }
        post = std::max(post, std::abs(s) * r.norm);
      }
      stats.residual = post;
      if (post <= tol) {
        stats.converged = true;
        return stats;
      }
    }
  }
  if (throw_on_budget) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", stats.residual);
    throw Error(ErrorCode::NoConvergence, "residual " + std::string(buf) + " after " +
                                              std::to_string(max_sweeps) + " sweeps");
  }
  return stats;
}

ScalarField solve_dirichlet_harmonic(const ScalarField& data, double tol, int max_sweeps) {
  ScalarField u = data;
  LaplaceSystem(data).solve(u, tol, max_sweeps);
  return u;
}

}  // namespace fbp
