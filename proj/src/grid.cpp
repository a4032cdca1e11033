#include "fbp/grid.hpp"

#include <algorithm>
#include <string>

#include "fbp/error.hpp"

namespace fbp {

Grid2D::Grid2D(Point origin, double h, int nx, int ny) : origin_(origin), h_(h), nx_(nx), ny_(ny) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorCode::NonPositiveSpacing, "grid spacing must be positive, got " + std::to_string(h));
  }
  if (nx < 3 || ny < 3) {
    throw Error(ErrorCode::RectTooSmall, "grid needs at least 3x3 nodes");
  }
}

std::pair<int, int> Grid2D::nearest(Point p) const {
  auto [fx, fy] = coords(p);
  int i = static_cast<int>(std::lround(fx));
  int j = static_cast<int>(std::lround(fy));
  return {std::clamp(i, 0, nx_ - 1), std::clamp(j, 0, ny_ - 1)};
}

bool Grid2D::contains_ball(Point c, double r) const {
  const Rect b = bounds();
  const double slack = 1e-12 * h_;
  return c.x - r >= b.x0 - slack && c.x + r <= b.x1 + slack && c.y - r >= b.y0 - slack &&
         c.y + r <= b.y1 + slack;
}

Grid2D make_grid(const Rect& rect, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorCode::NonPositiveSpacing, "grid spacing must be positive, got " + std::to_string(h));
  }
  const double w = rect.x1 - rect.x0;
  const double t = rect.y1 - rect.y0;
  if (w < 3.0 * h * (1.0 - 1e-12) || t < 3.0 * h * (1.0 - 1e-12)) {
    throw Error(ErrorCode::RectTooSmall, "rectangle sides must be at least 3h");
  }
  auto count = [h](double len) {
    const double cells = len / h;
    return static_cast<int>(std::ceil(cells - 1e-9 * std::max(1.0, cells))) + 1;
  };
  return Grid2D({rect.x0, rect.y0}, h, count(w), count(t));
}

ScalarField::ScalarField(Grid2D grid, double fill, NodeTag tag)
    : grid_(grid), values_(grid.size(), fill), tags_(grid.size(), tag) {}

double ScalarField::sample(Point p) const {
  auto [fx, fy] = grid_.coords(p);
  fx = std::clamp(fx, 0.0, static_cast<double>(grid_.nx() - 1));
  fy = std::clamp(fy, 0.0, static_cast<double>(grid_.ny() - 1));
  int i = std::min(static_cast<int>(fx), grid_.nx() - 2);
  int j = std::min(static_cast<int>(fy), grid_.ny() - 2);
  const double a = fx - i;
  const double b = fy - j;
  return (1 - a) * (1 - b) * (*this)(i, j) + a * (1 - b) * (*this)(i + 1, j) + (1 - a) * b * (*this)(i, j + 1) +
         a * b * (*this)(i + 1, j + 1);
}

void ScalarField::tag_edges_dirichlet() {
  for (int j = 0; j < grid_.ny(); ++j) {
    for (int i = 0; i < grid_.nx(); ++i) {
      if (grid_.on_edge(i, j)) set_tag(i, j, NodeTag::Dirichlet);
    }
  }
}

ScalarField sample_field(const Grid2D& grid, const std::function<double(Point)>& fn) {
  ScalarField f(grid);
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) f(i, j) = fn(grid.node(i, j));
  }
  f.tag_edges_dirichlet();
  return f;
}

}  // namespace fbp
