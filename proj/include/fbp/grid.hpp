#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace fbp {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point a, Point b) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;
};

/// Grid nodes are stored row-major: index = j * nx + i, with i running along x
/// (fastest) and j along y. Node (i, j) sits at origin + (i h, j h), always
/// computed from the integers so no rounding accumulates.
class Grid2D {
 public:
  Grid2D(Point origin, double h, int nx, int ny);

  Point origin() const { return origin_; }
  double h() const { return h_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_); }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(i);
  }
  int i_of(std::size_t k) const { return static_cast<int>(k % static_cast<std::size_t>(nx_)); }
  int j_of(std::size_t k) const { return static_cast<int>(k / static_cast<std::size_t>(nx_)); }

  Point node(int i, int j) const { return {origin_.x + i * h_, origin_.y + j * h_}; }
  Point node(std::size_t k) const { return node(i_of(k), j_of(k)); }

  bool contains(int i, int j) const { return i >= 0 && j >= 0 && i < nx_ && j < ny_; }
  bool on_edge(int i, int j) const { return i == 0 || j == 0 || i == nx_ - 1 || j == ny_ - 1; }

  /// Closest node to p, clamped into the grid.
  std::pair<int, int> nearest(Point p) const;

  /// Fractional grid coordinates of p (not clamped).
  std::pair<double, double> coords(Point p) const {
    return {(p.x - origin_.x) / h_, (p.y - origin_.y) / h_};
  }

  Rect bounds() const { return {origin_.x, origin_.y, origin_.x + (nx_ - 1) * h_, origin_.y + (ny_ - 1) * h_}; }

  /// True when the closed disk B_r(c) lies inside the node hull.
  bool contains_ball(Point c, double r) const;

  bool same_as(const Grid2D& other) const {
    return nx_ == other.nx_ && ny_ == other.ny_ && h_ == other.h_ && origin_ == other.origin_;
  }

 private:
  Point origin_;
  double h_;
  int nx_;
  int ny_;
};

/// Smallest grid with spacing h whose node hull covers rect. Nodes on the
/// lower-left corner of rect coincide with the origin.
/// Throws NON_POSITIVE_SPACING or RECT_TOO_SMALL (a side shorter than 3h).
Grid2D make_grid(const Rect& rect, double h);

enum class NodeTag : std::uint8_t { Interior = 0, Dirichlet = 1, Outside = 2 };

/// A grid function with a per-node role tag. DIRICHLET values are data and are
/// never touched by solves; OUTSIDE nodes carry no meaningful value.
class ScalarField {
 public:
  explicit ScalarField(Grid2D grid, double fill = 0.0, NodeTag tag = NodeTag::Interior);

  const Grid2D& grid() const { return grid_; }

  double& operator()(int i, int j) { return values_[grid_.index(i, j)]; }
  double operator()(int i, int j) const { return values_[grid_.index(i, j)]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }

  NodeTag tag(int i, int j) const { return tags_[grid_.index(i, j)]; }
  NodeTag tag(std::size_t k) const { return tags_[k]; }
  void set_tag(int i, int j, NodeTag t) { tags_[grid_.index(i, j)] = t; }
  void set_tag(std::size_t k, NodeTag t) { tags_[k] = t; }

  std::span<const double> values() const { return values_; }
  std::vector<double>& mutable_values() { return values_; }
  std::span<const NodeTag> tags() const { return tags_; }

  /// Bilinear interpolation over raw node values, clamped to the grid.
  double sample(Point p) const;

  /// Marks every node on the rectangle edge as DIRICHLET.
  void tag_edges_dirichlet();

 private:
  Grid2D grid_;
  std::vector<double> values_;
  std::vector<NodeTag> tags_;
};

/// Samples fn at every node. Rectangle-edge nodes are tagged DIRICHLET, the
/// rest INTERIOR.
ScalarField sample_field(const Grid2D& grid, const std::function<double(Point)>& fn);

}  // namespace fbp
