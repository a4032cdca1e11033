#include "fbp/free_boundary.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_map>

#include "fbp/operators.hpp"

namespace fbp {

namespace {

// Solves the n x n system in place by Gaussian elimination with partial
// pivoting. Returns false on a (relatively) singular matrix.
template <std::size_t N>
bool solve_small(std::array<std::array<double, N>, N>& a, std::array<double, N>& b) {
  double scale = 0.0;
  for (auto& row : a) {
    for (double v : row) scale = std::max(scale, std::abs(v));
  }
  if (scale == 0.0) return false;
  for (std::size_t c = 0; c < N; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < N; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    if (std::abs(a[piv][c]) < 1e-10 * scale) return false;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = c + 1; r < N; ++r) {
      const double m = a[r][c] / a[c][c];
      for (std::size_t k = c; k < N; ++k) a[r][k] -= m * a[c][k];
      b[r] -= m * b[c];
    }
  }
  for (std::size_t c = N; c-- > 0;) {
    double s = b[c];
    for (std::size_t k = c + 1; k < N; ++k) s -= a[c][k] * b[k];
    b[c] = s / a[c][c];
  }
  return true;
}

template <std::size_t N>
std::optional<Point> least_squares(Point p, std::span<const Point> where, std::span<const double> values, double h,
                                   std::array<double, N> (*basis)(double, double)) {
  std::array<std::array<double, N>, N> ata{};
  std::array<double, N> atb{};
  for (std::size_t s = 0; s < where.size(); ++s) {
    const auto phi = basis((where[s].x - p.x) / h, (where[s].y - p.y) / h);
    for (std::size_t r = 0; r < N; ++r) {
      for (std::size_t c = 0; c < N; ++c) ata[r][c] += phi[r] * phi[c];
      atb[r] += phi[r] * values[s];
    }
  }
  if (!solve_small(ata, atb)) return std::nullopt;
  return Point{atb[0] / h, atb[1] / h};
}

std::array<double, 5> quad_basis(double x, double y) { return {x, y, x * x, x * y, y * y}; }
std::array<double, 2> lin_basis(double x, double y) { return {x, y}; }

double span_scale(std::span<const Point> where, Point p) {
  double m = 0.0;
  for (Point q : where) m = std::max(m, distance(q, p));
  return m > 0.0 ? m : 1.0;
}

// Positive nodes outside D within `radius` of p.
void gather_nodes(const ScalarField& u, std::span<const std::uint8_t> positive, std::span<const std::uint8_t> in_D,
                  Point p, double radius, std::vector<Point>& where, std::vector<double>& values) {
  const Grid2D& g = u.grid();
  const auto [fx, fy] = g.coords(p);
  const int reach = static_cast<int>(std::ceil(radius / g.h()));
  const int ic = static_cast<int>(std::floor(fx));
  const int jc = static_cast<int>(std::floor(fy));
  for (int j = jc - reach; j <= jc + reach + 1; ++j) {
    for (int i = ic - reach; i <= ic + reach + 1; ++i) {
      if (!g.contains(i, j)) continue;
      const std::size_t k = g.index(i, j);
      if (!positive[k] || in_D[k]) continue;
      const Point q = g.node(i, j);
      if (distance(q, p) > radius) continue;
      where.push_back(q);
      values.push_back(u[k]);
    }
  }
}

}  // namespace

std::vector<Segment> contour_segments(const Grid2D& grid, std::span<const double> values) {
  std::vector<Segment> out;
  auto cross = [&](std::size_t a, std::size_t b) {
    const double va = values[a];
    const double vb = values[b];
    const double t = va / (va - vb);
    const Point pa = grid.node(a);
    const Point pb = grid.node(b);
    return pa + t * (pb - pa);
  };
  for (int j = 0; j + 1 < grid.ny(); ++j) {
    for (int i = 0; i + 1 < grid.nx(); ++i) {
      // Corners counter-clockwise from lower-left.
      const std::array<std::size_t, 4> c{grid.index(i, j), grid.index(i + 1, j), grid.index(i + 1, j + 1),
                                         grid.index(i, j + 1)};
      std::array<bool, 4> in{};
      int count = 0;
      for (int q = 0; q < 4; ++q) {
        in[q] = values[c[q]] < 0.0;
        count += in[q];
      }
      if (count == 0 || count == 4) continue;
      std::vector<Point> pts;
      for (int e = 0; e < 4; ++e) {
        if (in[e] != in[(e + 1) % 4]) {
          pts.push_back(cross(c[e], c[(e + 1) % 4]));
        }
      }
      if (pts.size() == 2) {
        out.push_back({pts[0], pts[1]});
        continue;
      }
      // Saddle: four crossings on edges 0..3 in order.
      const double mean = 0.25 * (values[c[0]] + values[c[1]] + values[c[2]] + values[c[3]]);
      const bool centre_in = mean < 0.0;
      // Join crossings around the corners whose side differs from the centre.
      if (in[0] != centre_in) {
        out.push_back({pts[3], pts[0]});
        out.push_back({pts[1], pts[2]});
      } else {
        out.push_back({pts[0], pts[1]});
        out.push_back({pts[2], pts[3]});
      }
    }
  }
  return out;
}

double total_length(const std::vector<Segment>& segments) {
  double s = 0.0;
  for (const Segment& seg : segments) s += distance(seg.a, seg.b);
  return s;
}

std::optional<Point> fit_gradient(Point p, std::span<const Point> where, std::span<const double> values, double h) {
  if (where.size() >= 7) {
    if (auto g = least_squares<5>(p, where, values, h, quad_basis)) return g;
  }
  return fit_gradient_linear(p, where, values);
}

std::optional<Point> fit_gradient_linear(Point p, std::span<const Point> where, std::span<const double> values) {
  if (where.size() < 2) return std::nullopt;
  return least_squares<2>(p, where, values, span_scale(where, p), lin_basis);
}

std::vector<FreeBoundaryPoint> boundary_fluxes(const ScalarField& u, std::span<const std::uint8_t> positive,
                                               std::span<const std::uint8_t> in_D, std::span<const Point> crossings) {
  const Grid2D& g = u.grid();
  const double h = g.h();
  const double radius = 2.5 * h;
  std::unordered_map<std::size_t, std::vector<std::size_t>> buckets;
  auto cell_of = [&](Point p) {
    const auto [nearest_i, nearest_j] = g.nearest(p);
    return g.index(nearest_i, nearest_j);
  };
  for (std::size_t k = 0; k < crossings.size(); ++k) buckets[cell_of(crossings[k])].push_back(k);

  std::vector<FreeBoundaryPoint> out;
  out.reserve(crossings.size());
  std::vector<Point> where;
  std::vector<double> values;
  for (std::size_t k = 0; k < crossings.size(); ++k) {
    const Point p = crossings[k];
    where.clear();
    values.clear();
    gather_nodes(u, positive, in_D, p, radius, where, values);
    const auto [ci, cj] = g.nearest(p);
    for (int j = cj - 3; j <= cj + 3; ++j) {
      for (int i = ci - 3; i <= ci + 3; ++i) {
        if (!g.contains(i, j)) continue;
        auto it = buckets.find(g.index(i, j));
        if (it == buckets.end()) continue;
        for (std::size_t o : it->second) {
          if (o == k || distance(crossings[o], p) > radius) continue;
          where.push_back(crossings[o]);
          values.push_back(0.0);
        }
      }
    }
    FreeBoundaryPoint fb;
    fb.p = p;
    auto grad = fit_gradient(p, where, values, h);
    if (grad && norm(*grad) > 0.0) {
      fb.flux = norm(*grad);
      fb.normal = (1.0 / fb.flux) * *grad;
    }
    out.push_back(fb);
  }
  return out;
}

std::optional<double> one_sided_flux(const ScalarField& u, std::span<const std::uint8_t> positive,
                                     std::span<const std::uint8_t> in_D, Point p) {
  std::vector<Point> where;
  std::vector<double> values;
  gather_nodes(u, positive, in_D, p, 2.0 * u.grid().h(), where, values);
  auto grad = fit_gradient_linear(p, where, values);
  if (!grad) return std::nullopt;
  return norm(*grad);
}

std::vector<FreeBoundaryPoint> extract_free_boundary(const ScalarField& u, std::span<const std::uint8_t> positive,
                                                     std::span<const std::uint8_t> in_D) {
  const Grid2D& g = u.grid();
  const double h = g.h();
  std::vector<Point> crossings;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t k = g.index(i, j);
      if (!positive[k] || in_D[k]) continue;
      for (int d = 0; d < 4; ++d) {
        const int ii = i + kDi[d];
        const int jj = j + kDj[d];
        if (!g.contains(ii, jj) || positive[g.index(ii, jj)]) continue;
        double t = 0.5 * h;
        const int bi = i - kDi[d];
        const int bj = j - kDj[d];
        if (g.contains(bi, bj)) {
          const std::size_t b = g.index(bi, bj);
          if (positive[b] && !in_D[b]) {
            const double slope = (u[b] - u[k]) / h;
            if (slope > 0.0) t = std::clamp(u[k] / slope, 0.0, h);
          }
        }
        const Point p0 = g.node(i, j);
        crossings.push_back({p0.x + kDi[d] * t, p0.y + kDj[d] * t});
      }
    }
  }
  return boundary_fluxes(u, positive, in_D, crossings);
}

std::vector<std::uint8_t> disk_mask(const Grid2D& grid, const Disk& D) {
  std::vector<std::uint8_t> m(grid.size(), 0);
  for (std::size_t k = 0; k < grid.size(); ++k) m[k] = D.contains(grid.node(k)) ? 1 : 0;
  return m;
}

Solution solution_from_field(ScalarField field, const ProblemSpec& spec) {
  const Grid2D& g = field.grid();
  const double theta = positivity_threshold(spec);
  const auto in_D = disk_mask(g, spec.D);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (in_D[k]) field.set_tag(k, NodeTag::Dirichlet);
  }
  Solution sol(std::move(field));
  sol.positive.assign(g.size(), 0);
  for (std::size_t k = 0; k < g.size(); ++k) sol.positive[k] = sol.u[k] > theta ? 1 : 0;
  sol.boundary = extract_free_boundary(sol.u, sol.positive, in_D);
  sol.converged = true;
  sol.method = "field";
  return sol;
}

}  // namespace fbp
