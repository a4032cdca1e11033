#include "fbp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include "fbp/error.hpp"

namespace fbp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1D squared distance transform of a sampled function (lower envelope of
// parabolas).
void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = 0;
  int first = -1;
  for (int q = 0; q < n; ++q) {
    if (std::isfinite(f[q])) {
      first = q;
      break;
    }
  }
  if (first < 0) {
    std::fill(d.begin(), d.end(), kInf);
    return;
  }
  v[0] = first;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = first + 1; q < n; ++q) {
    if (!std::isfinite(f[q])) continue;
    double s = 0.0;
    while (true) {
      const int p = v[k];
      s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

std::vector<Point> hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  if (pts.size() < 3) return pts;
  auto cross = [](Point o, Point a, Point b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); };
  std::vector<Point> h(2 * pts.size());
  std::size_t k = 0;
  for (const Point& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

Component finish(const Grid2D& g, std::vector<std::size_t> nodes, const std::optional<Disk>& window) {
  Component c;
  std::sort(nodes.begin(), nodes.end());
  std::vector<Point> pts;
  pts.reserve(nodes.size());
  Point sum;
  for (std::size_t k : nodes) {
    const Point x = g.node(k);
    pts.push_back(x);
    sum = sum + x;
    if (window && distance(x, window->center) > window->radius - g.h()) c.touches_window = true;
  }
  c.area = static_cast<double>(nodes.size()) * g.h() * g.h();
  c.centroid = (1.0 / static_cast<double>(nodes.size())) * sum;
  const auto hp = hull(pts);
  for (std::size_t a = 0; a < hp.size(); ++a) {
    for (std::size_t b = a + 1; b < hp.size(); ++b) c.diameter = std::max(c.diameter, distance(hp[a], hp[b]));
  }
  c.nodes = std::move(nodes);
  return c;
}

std::vector<Component> label(const Grid2D& g, const std::vector<std::uint8_t>& mask, bool eight,
                             std::vector<int>& labels, const std::optional<Disk>& window) {
  labels.assign(g.size(), -1);
  std::vector<Component> out;
  std::deque<std::size_t> queue;
  for (std::size_t seed = 0; seed < g.size(); ++seed) {
    if (!mask[seed] || labels[seed] >= 0) continue;
    const int id = static_cast<int>(out.size());
    std::vector<std::size_t> nodes;
    labels[seed] = id;
    queue.push_back(seed);
    while (!queue.empty()) {
      const std::size_t k = queue.front();
      queue.pop_front();
      nodes.push_back(k);
      const int i = g.i_of(k);
      const int j = g.j_of(k);
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if ((di == 0 && dj == 0) || (!eight && di != 0 && dj != 0)) continue;
          if (!g.contains(i + di, j + dj)) continue;
          const std::size_t n = g.index(i + di, j + dj);
          if (!mask[n] || labels[n] >= 0) continue;
          labels[n] = id;
          queue.push_back(n);
        }
      }
    }
    out.push_back(finish(g, std::move(nodes), window));
  }
  return out;
}

void check_mask(const Grid2D& g, std::span<const std::uint8_t> m) {
  if (m.size() != g.size()) throw Error(ErrorCode::GridMismatch, "mask size differs from the grid");
}

}  // namespace

RegionDecomposition label_components(const Grid2D& grid, std::span<const std::uint8_t> positive,
                                     std::optional<Disk> window) {
  check_mask(grid, positive);
  RegionDecomposition out{grid, window, {}, {}, {}, {}, {}, {}, 0.0, 0.0};
  const std::size_t n = grid.size();
  std::vector<std::uint8_t> in(n, 1);
  if (window) {
    for (std::size_t k = 0; k < n; ++k) in[k] = window->contains(grid.node(k));
  }
  // Chebyshev distance >= 2 from every positive node (over the whole grid).
  std::vector<std::uint8_t> near_pos(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    if (!positive[k]) continue;
    const int i = grid.i_of(k);
    const int j = grid.j_of(k);
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        if (grid.contains(i + di, j + dj)) near_pos[grid.index(i + di, j + dj)] = 1;
      }
    }
  }
  out.positive.assign(n, 0);
  out.open_zero.assign(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    if (!in[k]) continue;
    out.positive[k] = positive[k] ? 1 : 0;
    out.open_zero[k] = near_pos[k] ? 0 : 1;
  }
  out.positive_components = label(grid, out.positive, false, out.positive_label, window);
  out.zero_components = label(grid, out.open_zero, true, out.zero_label, window);
  for (const auto& c : out.positive_components) out.positive_area += c.area;
  for (const auto& c : out.zero_components) out.zero_area += c.area;
  return out;
}

std::vector<double> distance_transform(const Grid2D& grid, std::span<const std::uint8_t> target) {
  check_mask(grid, target);
  const int nx = grid.nx();
  const int ny = grid.ny();
  std::vector<double> sq(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) sq[k] = target[k] ? 0.0 : kInf;
  const int m = std::max(nx, ny);
  std::vector<int> v(m);
  std::vector<double> z(m + 1);
  std::vector<double> f;
  std::vector<double> d;
  for (int j = 0; j < ny; ++j) {
    f.assign(nx, 0.0);
    d.assign(nx, 0.0);
    for (int i = 0; i < nx; ++i) f[i] = sq[grid.index(i, j)];
    edt_1d(f, d, v, z);
    for (int i = 0; i < nx; ++i) sq[grid.index(i, j)] = d[i];
  }
  for (int i = 0; i < nx; ++i) {
    f.assign(ny, 0.0);
    d.assign(ny, 0.0);
    for (int j = 0; j < ny; ++j) f[j] = sq[grid.index(i, j)];
    edt_1d(f, d, v, z);
    for (int j = 0; j < ny; ++j) sq[grid.index(i, j)] = d[j];
  }
  for (double& s : sq) s = std::isfinite(s) ? std::sqrt(s) * grid.h() : kInf;
  return sq;
}

TangentBallFinder::TangentBallFinder(const Grid2D& grid, std::span<const std::uint8_t> positive, Side side)
    : grid_(grid), positive_(positive.begin(), positive.end()), other_(grid.size()), side_(side) {
  check_mask(grid, positive);
  // The ball must avoid `other_`.
  for (std::size_t k = 0; k < grid.size(); ++k) {
    other_[k] = side == Side::Exterior ? (positive[k] != 0) : (positive[k] == 0);
  }
  dt_ = distance_transform(grid, other_);
}

std::vector<TangentBallRecord> TangentBallFinder::find(Point x0, std::span<const double> radii) const {
  const Grid2D& grid = grid_;
  const auto& positive = positive_;
  const auto& other = other_;
  const auto& dt = dt_;
  const Side side = side_;
  const double h = grid.h();
  bool saw_pos = false;
  bool saw_zero = false;
  {
    const auto [ci, cj] = grid.coords(x0);
    for (int j = static_cast<int>(std::floor(cj - 2)); j <= static_cast<int>(std::ceil(cj + 2)); ++j) {
      for (int i = static_cast<int>(std::floor(ci - 2)); i <= static_cast<int>(std::ceil(ci + 2)); ++i) {
        if (!grid.contains(i, j) || distance(grid.node(i, j), x0) > 1.5 * h) continue;
        (positive[grid.index(i, j)] ? saw_pos : saw_zero) = true;
      }
    }
  }
  if (!saw_pos || !saw_zero) throw Error(ErrorCode::PointNotOnBoundary, "no sign change within 1.5h of x0");
  std::vector<TangentBallRecord> out;
  for (double rho : radii) {
    TangentBallRecord rec;
    rec.x0 = x0;
    rec.radius = rho;
    rec.side = side;
    rec.contact_tol = h;
    if (rho < 2.0 * h) {
      out.push_back(rec);
      continue;
    }
    std::vector<std::pair<double, std::size_t>> cand;
    const auto [ci, cj] = grid.coords(x0);
    const int reach = static_cast<int>(std::ceil((rho + h) / h)) + 1;
    for (int j = static_cast<int>(cj) - reach; j <= static_cast<int>(cj) + reach + 1; ++j) {
      for (int i = static_cast<int>(ci) - reach; i <= static_cast<int>(ci) + reach + 1; ++i) {
        if (!grid.contains(i, j)) continue;
        const std::size_t k = grid.index(i, j);
        if (std::abs(distance(grid.node(k), x0) - rho) > h) continue;
        if (other[k] || dt[k] < rho - h) continue;
        cand.push_back({-dt[k], k});
      }
    }
    std::sort(cand.begin(), cand.end());
    for (const auto& [neg, k] : cand) {
      const Point y = grid.node(k);
      if (!grid.contains_ball(y, rho)) continue;
      int inside = 0;
      const auto [yi, yj] = grid.coords(y);
      const int r = static_cast<int>(std::ceil(rho / h));
      for (int j = static_cast<int>(yj) - r; j <= static_cast<int>(yj) + r + 1 && inside <= 1; ++j) {
        for (int i = static_cast<int>(yi) - r; i <= static_cast<int>(yi) + r + 1; ++i) {
          if (!grid.contains(i, j)) continue;
          const std::size_t n = grid.index(i, j);
          if (other[n] && distance(grid.node(n), y) < rho) ++inside;
        }
      }
      if (inside > 1) continue;
      rec.center = y;
      rec.found = true;
      rec.opposite_inside = inside;
      break;
    }
    out.push_back(rec);
  }
  return out;
}

std::vector<TangentBallRecord> find_tangent_balls(const Grid2D& grid, std::span<const std::uint8_t> positive, Point x0,
                                                  std::span<const double> radii, Side side) {
  return TangentBallFinder(grid, positive, side).find(x0, radii);
}

std::vector<DensitySample> density_profile(const Grid2D& grid, std::span<const std::uint8_t> positive, Point x0,
                                           std::span<const double> radii) {
  check_mask(grid, positive);
  std::vector<DensitySample> out;
  const double h = grid.h();
  for (double r : radii) {
    if (!grid.contains_ball(x0, r)) throw Error(ErrorCode::BallOutsideGrid, "density ball leaves the grid");
    std::size_t pos = 0;
    std::size_t zero = 0;
    const auto [ci, cj] = grid.coords(x0);
    const int reach = static_cast<int>(std::ceil(r / h)) + 1;
    for (int j = static_cast<int>(cj) - reach; j <= static_cast<int>(cj) + reach; ++j) {
      for (int i = static_cast<int>(ci) - reach; i <= static_cast<int>(ci) + reach; ++i) {
        if (!grid.contains(i, j) || distance(grid.node(i, j), x0) > r) continue;
        (positive[grid.index(i, j)] ? pos : zero) += 1;
      }
    }
    const double ball = std::numbers::pi * r * r;
    out.push_back({r, static_cast<double>(pos) * h * h / ball, static_cast<double>(zero) * h * h / ball});
  }
  return out;
}

std::vector<BoxCount> perimeter_boxcount(const Grid2D& grid, const Component& component, std::span<const double> eps) {
  if (component.nodes.empty()) throw Error(ErrorCode::EmptyComponent, "box count of an empty component");
  std::vector<std::uint8_t> member(grid.size(), 0);
  for (std::size_t k : component.nodes) member[k] = 1;
  std::vector<Point> rim;
  for (std::size_t k : component.nodes) {
    const int i = grid.i_of(k);
    const int j = grid.j_of(k);
    bool edge = false;
    for (int d = 0; d < 4 && !edge; ++d) {
      const int ii = i + (d == 0) - (d == 1);
      const int jj = j + (d == 2) - (d == 3);
      edge = !grid.contains(ii, jj) || !member[grid.index(ii, jj)];
    }
    if (edge) rim.push_back(grid.node(k));
  }
  std::vector<BoxCount> out;
  for (double e : eps) {
    std::vector<std::uint8_t> covered(rim.size(), 0);
    std::size_t left = rim.size();
    std::size_t centre = 0;
    std::size_t count = 0;
    while (left > 0) {
      ++count;
      const Point c = rim[centre];
      for (std::size_t m = 0; m < rim.size(); ++m) {
        if (!covered[m] && distance(rim[m], c) <= e) {
          covered[m] = 1;
          --left;
        }
      }
      double best = kInf;
      for (std::size_t m = 0; m < rim.size(); ++m) {
        if (covered[m]) continue;
        const double d = distance(rim[m], c);
        if (d < best) {
          best = d;
          centre = m;
        }
      }
    }
    out.push_back({e, count, static_cast<double>(count) * e});
  }
  return out;
}

std::vector<AngularTrace> angular_traces(const RegionDecomposition& dec, Point xc, std::span<const double> radii,
                                         int samples) {
  if (dec.positive_components.size() != 2) {
    throw Error(ErrorCode::ComponentCountMismatch,
                "need 2 positive components, found " + std::to_string(dec.positive_components.size()));
  }
  const Grid2D& g = dec.grid;
  std::vector<AngularTrace> out;
  for (double r : radii) {
    int c1 = 0;
    int c2 = 0;
    for (int s = 0; s < samples; ++s) {
      const double t = 2.0 * std::numbers::pi * s / samples;
      const Point x{xc.x + r * std::cos(t), xc.y + r * std::sin(t)};
      const auto [i, j] = g.nearest(x);
      const int l = dec.positive_label[g.index(i, j)];
      c1 += l == 0;
      c2 += l == 1;
    }
    out.push_back({r, 2.0 * c1 / samples, 2.0 * c2 / samples});
  }
  return out;
}

ZeroAudit zero_component_audit(const Grid2D& grid, std::span<const std::uint8_t> positive, const Disk& ball) {
  if (!grid.contains_ball(ball.center, ball.radius)) {
    throw Error(ErrorCode::BallOutsideGrid, "audit ball leaves the grid");
  }
  const RegionDecomposition dec = label_components(grid, positive, ball);
  ZeroAudit out;
  out.ball = ball;
  for (const auto& c : dec.zero_components) {
    if (c.touches_window) {
      ++out.touching;
    } else {
      out.interior.push_back(c);
    }
  }
  // Largest ball inside both the zero set (one cell of slack) and B/2.
  std::vector<std::uint8_t> pos(positive.begin(), positive.end());
  const auto dt = distance_transform(grid, pos);
  const double h = grid.h();
  const double half = 0.5 * ball.radius;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (positive[k]) continue;
    const Point z = grid.node(k);
    const double dc = distance(z, ball.center);
    if (dc > half) continue;
    const double r = std::min(dt[k] - h, half - dc);
    if (r > out.inscribed_radius) {
      out.inscribed_radius = r;
      out.inscribed_center = z;
    }
  }
  return out;
}

}  // namespace fbp
