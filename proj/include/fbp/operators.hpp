#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "fbp/grid.hpp"

namespace fbp {

/// 5-point Laplacian scaled by 1/h^2 at INTERIOR nodes. Other nodes get 0 and
/// keep their tag. Throws MISSING_NEIGHBOR if an INTERIOR node touches the grid
/// edge or an OUTSIDE node.
ScalarField discrete_laplacian(const ScalarField& u);

/// |grad u| at every non-OUTSIDE node. Central differences where both
/// neighbours along an axis are usable, one-sided otherwise.
/// Throws MISSING_NEIGHBOR if an axis has no usable neighbour at all.
ScalarField gradient_magnitude(const ScalarField& u);

/// Neighbour directions used by the embedded stencils.
enum Dir : int { kEast = 0, kWest = 1, kNorth = 2, kSouth = 3 };
inline constexpr std::array<int, 4> kDi{1, -1, 0, 0};
inline constexpr std::array<int, 4> kDj{0, 0, 1, -1};

struct SolveStats {
  int sweeps = 0;
  double residual = 0.0;  // max scaled |L u| over unknowns
  double omega = 1.0;
  bool converged = false;
};

/// Dirichlet problem for the Laplacian on the INTERIOR nodes of a field.
///
/// An arm from an unknown node towards a neighbour can be cut: the neighbour
/// is replaced by a boundary point at distance fraction*h carrying a value
/// (Shortley-Weller). Uncut arms must land on a DIRICHLET or INTERIOR node.
///
/// Relaxation is SOR in lexicographic order (j outer, i inner), ω fixed from
/// the BFS depth of the unknown region. Converged when the largest residual,
/// scaled to the regular diagonal 4/h^2, is at most tol. On rows without cuts
/// this is the plain discrete Laplacian.
class LaplaceSystem {
 public:
  explicit LaplaceSystem(const ScalarField& layout);

  /// Cuts the arm of node k in direction dir. Fractions are clamped to
  /// [1e-3, 1]. A later cut on the same arm replaces the earlier one.
  void add_cut(std::size_t k, int dir, double fraction, double value);

  /// Solves in place. Only INTERIOR values of u change.
  /// Throws OPEN_BOUNDARY, and NO_CONVERGENCE when throw_on_budget is set.
  SolveStats solve(ScalarField& u, double tol, int max_sweeps, bool throw_on_budget = true) const;

  /// Scaled residual of the embedded operator at unknown node k.
  double residual_at(const ScalarField& u, std::size_t k) const;

 private:
  struct Arm {
    double fraction = 1.0;
    double value = 0.0;
    bool cut = false;
  };
  const Grid2D grid_;
  std::vector<NodeTag> tags_;
  std::vector<std::array<Arm, 4>> arms_;  // indexed by node
};

/// Harmonic extension of the DIRICHLET data of `data` into its INTERIOR nodes
/// on the plain 5-point stencil. Throws OPEN_BOUNDARY or NO_CONVERGENCE.
ScalarField solve_dirichlet_harmonic(const ScalarField& data, double tol, int max_sweeps = 200000);

}  // namespace fbp
