#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fbp/grid.hpp"
#include "fbp/problem.hpp"

namespace fbp {

struct Component {
  std::vector<std::size_t> nodes;  // ascending node index
  double area = 0.0;               // node count * h^2
  double diameter = 0.0;           // largest node-to-node distance
  bool touches_window = false;     // reaches the rim of the analysis ball
  Point centroid;
};

/// Components of {u > 0} (4-connected) and of the open zero set (8-connected).
/// The open zero set is the zero nodes at Chebyshev distance >= 2 cells from
/// every positive node. With a window, only nodes in the closed window disk
/// take part and touches_window marks components with a node within h of its
/// rim. Labels follow the scan order of each component's first node; -1 marks
/// nodes outside the respective set.
struct RegionDecomposition {
  Grid2D grid;
  std::optional<Disk> window;
  std::vector<std::uint8_t> positive;   // in-window positivity
  std::vector<std::uint8_t> open_zero;  // in-window open zero set
  std::vector<int> positive_label;
  std::vector<int> zero_label;
  std::vector<Component> positive_components;
  std::vector<Component> zero_components;
  double positive_area = 0.0;
  double zero_area = 0.0;
};

RegionDecomposition label_components(const Grid2D& grid, std::span<const std::uint8_t> positive,
                                     std::optional<Disk> window = std::nullopt);

/// Exact Euclidean distance (length units) from every node to the nearest node
/// where target is nonzero; +inf when target is empty.
std::vector<double> distance_transform(const Grid2D& grid, std::span<const std::uint8_t> target);

enum class Side { Exterior, Interior };

struct TangentBallRecord {
  Point x0;
  Point center;
  double radius = 0.0;
  Side side = Side::Exterior;
  double contact_tol = 0.0;  // one cell
  bool found = false;
  int opposite_inside = 0;   // nodes of the other set strictly inside the ball
};

/// For each ρ, a ball of radius ρ in the zero set (EXTERIOR) or the positivity
/// set (INTERIOR) whose rim passes within h of x0. Centres are nodes y with
/// | |y - x0| - ρ | <= h; the one with the largest distance to the other set
/// is taken, provided that distance is >= ρ - h and at most one node of the
/// other set lies inside. Radii below 2h give an empty record.
/// Throws POINT_NOT_ON_BOUNDARY unless positive and zero nodes lie within
/// 1.5h of x0.
std::vector<TangentBallRecord> find_tangent_balls(const Grid2D& grid, std::span<const std::uint8_t> positive, Point x0,
                                                  std::span<const double> radii, Side side);

/// Same search with the distance transform computed once for many points.
class TangentBallFinder {
 public:
  TangentBallFinder(const Grid2D& grid, std::span<const std::uint8_t> positive, Side side);
  std::vector<TangentBallRecord> find(Point x0, std::span<const double> radii) const;

 private:
  Grid2D grid_;
  std::vector<std::uint8_t> positive_;
  std::vector<std::uint8_t> other_;
  std::vector<double> dt_;
  Side side_;
};

struct DensitySample {
  double r = 0.0;
  double positive_fraction = 0.0;  // |Ω ∩ B_r| / |B_r|
  double zero_fraction = 0.0;      // |Ω^c ∩ B_r| / |B_r|
};

/// Node-count areas (count h^2) over the exact disk area πr^2.
/// Throws BALL_OUTSIDE_GRID.
std::vector<DensitySample> density_profile(const Grid2D& grid, std::span<const std::uint8_t> positive, Point x0,
                                           std::span<const double> radii);

struct BoxCount {
  double eps = 0.0;
  std::size_t count = 0;
  double length = 0.0;  // count * eps
};

/// Greedy ε-net over the boundary nodes of a component (nodes with a
/// 4-neighbour outside it). The first centre is the first boundary node in
/// scan order; each next centre is the uncovered boundary node nearest to the
/// previous centre. Throws EMPTY_COMPONENT.
std::vector<BoxCount> perimeter_boxcount(const Grid2D& grid, const Component& component, std::span<const double> eps);

struct AngularTrace {
  double r = 0.0;
  double t1 = 0.0;  // arc fraction of component 1, in [0, 2]
  double t2 = 0.0;
};

/// Samples the circle of radius r at M angles (nearest node) and reports
/// 2 * (share of samples in each component). Needs exactly two positive
/// components, else COMPONENT_COUNT_MISMATCH.
std::vector<AngularTrace> angular_traces(const RegionDecomposition& dec, Point xc, std::span<const double> radii,
                                         int samples = 720);

struct ZeroAudit {
  Disk ball;
  std::vector<Component> interior;  // open zero components not reaching the rim
  std::size_t touching = 0;
  Point inscribed_center;
  double inscribed_radius = 0.0;    // largest zero ball inside B/2
};

/// Throws BALL_OUTSIDE_GRID.
ZeroAudit zero_component_audit(const Grid2D& grid, std::span<const std::uint8_t> positive, const Disk& ball);

}  // namespace fbp
