#include "fbp/verify.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>

#include "fbp/error.hpp"
#include "fbp/free_boundary.hpp"
#include "fbp/geometry.hpp"

namespace fbp {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "PASS";
    case Verdict::Fail:
      return "FAIL";
    case Verdict::Finding:
      return "FINDING";
  }
  return "FAIL";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Nearest point of a fixed set, by buckets searched in growing rings.
class NearestPoint {
 public:
  NearestPoint(std::vector<Point> pts, double cell) : pts_(std::move(pts)), cell_(cell) {
    for (const Point& p : pts_) {
      x0_ = std::min(x0_, p.x);
      y0_ = std::min(y0_, p.y);
      x1_ = std::max(x1_, p.x);
      y1_ = std::max(y1_, p.y);
    }
    nx_ = static_cast<int>((x1_ - x0_) / cell_) + 1;
    ny_ = static_cast<int>((y1_ - y0_) / cell_) + 1;
    buckets_.resize(static_cast<std::size_t>(nx_) * ny_);
    for (std::size_t m = 0; m < pts_.size(); ++m) buckets_[bucket(pts_[m])].push_back(m);
  }

  double distance_to(Point x) const {
    const int bi = std::clamp(static_cast<int>((x.x - x0_) / cell_), 0, nx_ - 1);
    const int bj = std::clamp(static_cast<int>((x.y - y0_) / cell_), 0, ny_ - 1);
    // Rings are exhausted once their nearest possible point beats the best.
    const double out = std::max({x0_ - x.x, x.x - x1_, y0_ - x.y, x.y - y1_, 0.0});
    double best = kInf;
    for (int ring = 0; ring <= std::max(nx_, ny_); ++ring) {
      if (ring > 0 && std::max((ring - 1) * cell_, out) > best) break;
      for (int j = bj - ring; j <= bj + ring; ++j) {
        if (j < 0 || j >= ny_) continue;
        const bool edge_row = j == bj - ring || j == bj + ring;
        for (int i = bi - ring; i <= bi + ring; i += edge_row ? 1 : 2 * std::max(ring, 1)) {
          if (i < 0 || i >= nx_) continue;
          for (std::size_t m : buckets_[static_cast<std::size_t>(j) * nx_ + i]) best = std::min(best, distance(x, pts_[m]));
        }
      }
    }
    return best;
  }

 private:
  std::size_t bucket(Point p) const {
    const int i = std::min(static_cast<int>((p.x - x0_) / cell_), nx_ - 1);
    const int j = std::min(static_cast<int>((p.y - y0_) / cell_), ny_ - 1);
    return static_cast<std::size_t>(j) * nx_ + i;
  }
  std::vector<Point> pts_;
  double cell_;
  double x0_ = kInf, y0_ = kInf, x1_ = -kInf, y1_ = -kInf;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<std::size_t>> buckets_;
};

double rel_change(double a, double b) { return std::abs(b - a) / std::max(std::abs(a), 1e-300); }

nlohmann::json hs(const SolutionSweep& sweep) {
  nlohmann::json out = nlohmann::json::array();
  for (const Solution* s : sweep) out.push_back(s->u.grid().h());
  return out;
}

}  // namespace

std::vector<Point> pick_boundary_points(const Solution& sol, Point center, std::size_t n) {
  std::vector<Point> out;
  if (sol.boundary.empty() || n == 0) return out;
  std::vector<std::size_t> used;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * (k + 0.5) / static_cast<double>(n);
    std::size_t best = 0;
    double gap = kInf;
    for (std::size_t m = 0; m < sol.boundary.size(); ++m) {
      const Point d = sol.boundary[m].p - center;
      double a = std::abs(std::atan2(d.y, d.x) - (t > std::numbers::pi ? t - 2.0 * std::numbers::pi : t));
      a = std::min(a, 2.0 * std::numbers::pi - a);
      if (a < gap) {
        gap = a;
        best = m;
      }
    }
    if (std::find(used.begin(), used.end(), best) != used.end()) continue;
    used.push_back(best);
    out.push_back(sol.boundary[best].p);
  }
  return out;
}

CheckRecord lipschitz_report(const SolutionSweep& sweep, const ProblemSpec& spec, double stability) {
  CheckRecord rec;
  rec.name = "lipschitz";
  rec.statement = "u grows at most linearly away from the free boundary: u <= C1 dist and |grad u| <= C2";
  nlohmann::json c1s = nlohmann::json::array();
  nlohmann::json c2s = nlohmann::json::array();
  std::vector<double> c1v, c2v;
  for (const Solution* s : sweep) {
    const Grid2D& g = s->u.grid();
    const auto in_D = disk_mask(g, spec.D);
    std::vector<Point> fb;
    for (const auto& b : s->boundary) fb.push_back(b.p);
    const double h = g.h();
    double c1 = 0.0;
    double c2 = 0.0;
    bool any = false;
    std::optional<NearestPoint> near;
    if (!fb.empty()) near.emplace(fb, 8.0 * h);
    for (int j = 1; j + 1 < g.ny(); ++j) {
      for (int i = 1; i + 1 < g.nx(); ++i) {
        const std::size_t k = g.index(i, j);
        if (!s->positive[k] || in_D[k]) continue;
        any = true;
        const auto& u = s->u;
        const double gx = (u(i + 1, j) - u(i - 1, j)) / (2.0 * h);
        const double gy = (u(i, j + 1) - u(i, j - 1)) / (2.0 * h);
        c2 = std::max(c2, std::hypot(gx, gy));
        if (near) {
          const double d = near->distance_to(g.node(k));
          if (d > 0.0) c1 = std::max(c1, u[k] / d);
        }
      }
    }
    if (!any) throw Error(ErrorCode::EmptyPositivitySet, "no positive node outside D");
    c1s.push_back(c1);
    c2s.push_back(c2);
    c1v.push_back(c1);
    c2v.push_back(c2);
  }
  bool ok = true;
  nlohmann::json changes = nlohmann::json::array();
  for (std::size_t m = 1; m < c1v.size(); ++m) {
    const double a = rel_change(c1v[m - 1], c1v[m]);
    const double b = rel_change(c2v[m - 1], c2v[m]);
    changes.push_back({{"C1", a}, {"C2", b}});
    ok = ok && a <= stability && b <= stability;
  }
  rec.measured = {{"C1", c1s}, {"C2", c2s}, {"relative_change", changes}};
  rec.tolerance = {{"stability", stability}};
  rec.sweep = {{"h", hs(sweep)}};
  rec.verdict = ok ? Verdict::Pass : Verdict::Fail;
  return rec;
}

std::vector<double> sup_ratios(const Solution& sol, Point x0, std::span<const double> radii, bool per_component) {
  const Grid2D& g = sol.u.grid();
  const double h = g.h();
  for (double r : radii) {
    if (r < 4.0 * h) throw Error(ErrorCode::RadiusTooSmall, "radius below 4h");
  }
  std::vector<int> labels;
  int target = -1;
  if (per_component) {
    const RegionDecomposition dec = label_components(g, sol.positive);
    labels = dec.positive_label;
    double best = kInf;
    const auto [ci, cj] = g.coords(x0);
    for (int j = static_cast<int>(cj) - 3; j <= static_cast<int>(cj) + 4; ++j) {
      for (int i = static_cast<int>(ci) - 3; i <= static_cast<int>(ci) + 4; ++i) {
        if (!g.contains(i, j) || labels[g.index(i, j)] < 0) continue;
        const double d = distance(g.node(i, j), x0);
        if (d < best) {
          best = d;
          target = labels[g.index(i, j)];
        }
      }
    }
  }
  std::vector<double> out;
  for (double r : radii) {
    double sup = 0.0;
    const auto [ci, cj] = g.coords(x0);
    const int reach = static_cast<int>(std::ceil(r / h)) + 1;
    for (int j = static_cast<int>(cj) - reach; j <= static_cast<int>(cj) + reach; ++j) {
      for (int i = static_cast<int>(ci) - reach; i <= static_cast<int>(ci) + reach; ++i) {
        if (!g.contains(i, j) || distance(g.node(i, j), x0) > r) continue;
        const std::size_t k = g.index(i, j);
        if (per_component && labels[k] != target) continue;
        sup = std::max(sup, sol.u[k]);
      }
    }
    out.push_back(sup / r);
  }
  return out;
}

CheckRecord nondegeneracy_report(const SolutionSweep& sweep, const ProblemSpec& spec,
                                 const NondegeneracyParams& params) {
  CheckRecord rec;
  rec.name = "nondegeneracy";
  rec.statement = "u grows at least linearly from every free-boundary point: sup over B_r of u >= kappa r";
  const double kappa_min = params.kappa_factor * std::sqrt(spec.lambda);
  nlohmann::json per_grid = nlohmann::json::array();
  std::vector<double> kappas;
  bool ok = true;
  for (const Solution* s : sweep) {
    const double h = s->u.grid().h();
    std::vector<double> radii;
    for (double r = params.r_max; r >= params.r_min_cells * h * (1.0 - 1e-12); r *= 0.5) radii.push_back(r);
    const auto pts = pick_boundary_points(*s, spec.D.center, params.points);
    double k_glob = kInf;
    double k_comp = kInf;
    double upper = 0.0;
    for (const Point& p : pts) {
      for (double v : sup_ratios(*s, p, radii, false)) {
        k_glob = std::min(k_glob, v);
        upper = std::max(upper, v);
      }
      for (double v : sup_ratios(*s, p, radii, true)) k_comp = std::min(k_comp, v);
    }
    ok = ok && k_glob >= kappa_min && k_comp >= kappa_min;
    kappas.push_back(k_glob);
    per_grid.push_back({{"h", h},
                        {"kappa", k_glob},
                        {"kappa_component", k_comp},
                        {"upper", upper},
                        {"points", pts.size()},
                        {"radii", radii}});
  }
  for (std::size_t m = 1; m < kappas.size(); ++m) ok = ok && rel_change(kappas[m - 1], kappas[m]) <= params.stability;
  rec.measured = {{"grids", per_grid}};
  rec.tolerance = {{"kappa_min", kappa_min}, {"stability", params.stability}};
  rec.sweep = {{"h", hs(sweep)}};
  rec.verdict = ok ? Verdict::Pass : Verdict::Fail;
  return rec;
}

std::vector<double> laplacian_mass(const ScalarField& u, Point x0, std::span<const double> radii,
                                   std::span<const std::uint8_t> exclude) {
  const Grid2D& g = u.grid();
  const double h = g.h();
  double top = 0.0;
  for (double v : u.values()) top = std::max(top, v);
  const double th = 1e-12 * top;
  std::vector<double> out;
  for (double r : radii) {
    if (!g.contains_ball(x0, r)) throw Error(ErrorCode::BallOutsideGrid, "mass ball leaves the grid");
    double mass = 0.0;
    const auto [ci, cj] = g.coords(x0);
    const int reach = static_cast<int>(std::ceil(r / h)) + 1;
    for (int j = std::max(1, static_cast<int>(cj) - reach); j <= std::min(g.ny() - 2, static_cast<int>(cj) + reach); ++j) {
      for (int i = std::max(1, static_cast<int>(ci) - reach); i <= std::min(g.nx() - 2, static_cast<int>(ci) + reach);
           ++i) {
        const std::size_t k = g.index(i, j);
        if (distance(g.node(k), x0) > r) continue;
        if (!exclude.empty() && exclude[k]) continue;
        double lap = (u(i + 1, j) + u(i - 1, j) + u(i, j + 1) + u(i, j - 1) - 4.0 * u(i, j)) / (h * h);
        if (u[k] > th) lap = std::max(lap, 0.0);
        mass += lap * h * h;
      }
    }
    out.push_back(mass);
  }
  return out;
}

CheckRecord laplacian_mass_report(const Solution& sol, const ProblemSpec& spec, Point x0,
                                  std::span<const double> radii, double band_ratio) {
  const auto in_D = disk_mask(sol.u.grid(), spec.D);
  const auto mass = laplacian_mass(sol.u, x0, radii, in_D);
  CheckRecord rec;
  rec.name = "laplacian_mass";
  rec.statement = "the mass of the Laplacian of u in B_r around a free-boundary point is comparable to r";
  std::vector<double> ratio;
  for (std::size_t m = 0; m < radii.size(); ++m) ratio.push_back(mass[m] / radii[m]);
  const auto [lo, hi] = std::minmax_element(ratio.begin(), ratio.end());
  const double m = ratio.empty() ? 0.0 : *lo;
  const double M = ratio.empty() ? 0.0 : *hi;
  rec.measured = {{"x0", {x0.x, x0.y}},
                  {"mass", mass},
                  {"mass_over_r", ratio},
                  {"m", m},
                  {"M", M},
                  {"M_over_m", m > 0.0 ? M / m : kInf}};
  rec.tolerance = {{"max_ratio", band_ratio}};
  rec.sweep = {{"r", std::vector<double>(radii.begin(), radii.end())}, {"h", sol.u.grid().h()}};
  rec.verdict = (m > 0.0 && M / m <= band_ratio) ? Verdict::Pass : Verdict::Fail;
  return rec;
}

namespace {

// Area of the disk B_r(0) ∩ {X <= x, Y <= y}.
double lower_left_area(double r, double x, double y) {
  const double xe = std::clamp(x, -r, r);
  if (xe <= -r) return 0.0;
  auto S = [r](double t) {
    const double s = std::sqrt(std::max(0.0, r * r - t * t));
    return 0.5 * (t * s + r * r * std::asin(std::clamp(t / r, -1.0, 1.0)));
  };
  // Chord of the disk below Y = y at abscissa t: 0, y + s, or 2s.
  if (y >= r) return 2.0 * (S(xe) - S(-r));
  if (y <= -r) return 0.0;
  const double b = std::sqrt(r * r - y * y);
  double area = 0.0;
  auto full = [&](double a0, double a1) {
    if (a1 > a0) area += 2.0 * (S(a1) - S(a0));
  };
  auto partial = [&](double a0, double a1) {
    if (a1 > a0) area += y * (a1 - a0) + (S(a1) - S(a0));
  };
  if (y >= 0.0) {
    // |t| > b: whole chord below y; |t| < b: chord cut at y.
    full(-r, std::min(xe, -b));
    partial(-b, std::min(xe, b));
    full(b, xe);
  } else {
    // |t| < b only: the part between -s and y.
    partial(-b, std::min(xe, b));
  }
  return area;
}

}  // namespace

double disk_rect_area(Point c, double r, const Rect& rect) {
  const double x0 = rect.x0 - c.x, x1 = rect.x1 - c.x;
  const double y0 = rect.y0 - c.y, y1 = rect.y1 - c.y;
  const double a = lower_left_area(r, x1, y1) - lower_left_area(r, x0, y1) - lower_left_area(r, x1, y0) +
                   lower_left_area(r, x0, y0);
  return std::max(0.0, a);
}

MonotonicityResult monotonicity_J(const ScalarField& u1, const ScalarField& u2, Point xc, std::span<const double> radii,
                                  int samples) {
  const Grid2D& g = u1.grid();
  if (!g.same_as(u2.grid())) throw Error(ErrorCode::GridMismatch, "J needs both fields on one grid");
  const double h = g.h();
  double top = 0.0;
  for (double v : u1.values()) top = std::max(top, v);
  for (double v : u2.values()) top = std::max(top, v);
  const double th = 1e-12 * top;
  auto pos1 = [&](std::size_t k) { return u1[k] > th; };
  auto pos2 = [&](std::size_t k) { return u2[k] > th; };

  for (const auto& pos : {std::function<bool(std::size_t)>(pos1), std::function<bool(std::size_t)>(pos2)}) {
    bool zero_near = false;
    const auto [ci, cj] = g.coords(xc);
    for (int j = static_cast<int>(cj) - 2; j <= static_cast<int>(cj) + 3; ++j) {
      for (int i = static_cast<int>(ci) - 2; i <= static_cast<int>(ci) + 3; ++i) {
        if (g.contains(i, j) && distance(g.node(i, j), xc) <= 1.5 * h && !pos(g.index(i, j))) zero_near = true;
      }
    }
    if (!zero_near) throw Error(ErrorCode::CenterNotOnBothBoundaries, "a field is positive all around x_c");
  }
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t k = g.index(i, j);
      if (!pos1(k) || !pos2(k)) continue;
      bool layer = false;
      for (int dj = -1; dj <= 1 && !layer; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if (!g.contains(i + di, j + dj)) continue;
          const std::size_t n = g.index(i + di, j + dj);
          if (!pos1(n) || !pos2(n)) layer = true;
        }
      }
      if (!layer) throw Error(ErrorCode::OverlappingSupports, "positivity sets overlap beyond one cell");
    }
  }

  MonotonicityResult out;
  for (double R : radii) {
    if (!g.contains_ball(xc, R)) throw Error(ErrorCode::BallOutsideGrid, "J ball leaves the grid");
    MonotonicitySample s;
    s.R = R;
    const auto [ci, cj] = g.coords(xc);
    const int reach = static_cast<int>(std::ceil(R / h)) + 1;
    for (int j = std::max(0, static_cast<int>(cj) - reach); j < std::min(g.ny() - 1, static_cast<int>(cj) + reach); ++j) {
      for (int i = std::max(0, static_cast<int>(ci) - reach); i < std::min(g.nx() - 1, static_cast<int>(ci) + reach);
           ++i) {
        const Point a = g.node(i, j);
        const double w = disk_rect_area(xc, R, {a.x, a.y, a.x + h, a.y + h});
        if (w <= 0.0) continue;
        auto energy = [&](const ScalarField& u) {
          const double gx = (u(i + 1, j) - u(i, j) + u(i + 1, j + 1) - u(i, j + 1)) / (2.0 * h);
          const double gy = (u(i, j + 1) - u(i, j) + u(i + 1, j + 1) - u(i + 1, j)) / (2.0 * h);
          return (gx * gx + gy * gy) * w;
        };
        s.energy1 += energy(u1);
        s.energy2 += energy(u2);
      }
    }
    s.J = s.energy1 * s.energy2 / (R * R * R * R);
    int c1 = 0, c2 = 0;
    for (int m = 0; m < samples; ++m) {
      const double t = 2.0 * std::numbers::pi * m / samples;
      const Point x{xc.x + R * std::cos(t), xc.y + R * std::sin(t)};
      c1 += u1.sample(x) > th;
      c2 += u2.sample(x) > th;
    }
    s.t1 = 2.0 * c1 / samples;
    s.t2 = 2.0 * c2 / samples;
    out.samples.push_back(s);
  }
  if (!out.samples.empty()) {
    const auto it = std::max_element(out.samples.begin(), out.samples.end(),
                                     [](const auto& a, const auto& b) { return a.R < b.R; });
    out.tol_J = 1e-3 * it->J;
  }
  for (std::size_t m = 1; m < out.samples.size(); ++m) {
    const double dj = out.samples[m].J - out.samples[m - 1].J;
    if (dj < -out.tol_J) out.monotone = false;
    if (dj <= 0.0) out.strictly_increasing = false;
  }
  if (out.samples.size() < 2) out.strictly_increasing = false;
  return out;
}

CheckRecord monotonicity_record(const std::string& name, const MonotonicityResult& r, bool require_strict) {
  CheckRecord rec;
  rec.name = name;
  rec.statement = "J(R) = R^-4 E1(R) E2(R) for two disjoint positivity sets is nondecreasing in R";
  nlohmann::json R = nlohmann::json::array(), J = nlohmann::json::array(), t1 = nlohmann::json::array(),
                 t2 = nlohmann::json::array();
  for (const auto& s : r.samples) {
    R.push_back(s.R);
    J.push_back(s.J);
    t1.push_back(s.t1);
    t2.push_back(s.t2);
  }
  rec.measured = {{"J", J}, {"t1", t1}, {"t2", t2}, {"monotone", r.monotone},
                  {"strictly_increasing", r.strictly_increasing}};
  rec.tolerance = {{"tol_J", r.tol_J}, {"require_strict", require_strict}};
  rec.sweep = {{"R", R}};
  const bool ok = r.monotone && (!require_strict || r.strictly_increasing);
  rec.verdict = ok ? Verdict::Pass : Verdict::Fail;
  return rec;
}

std::vector<ArcEigenRow> arc_eigenvalue_bound(std::span<const Rational> alphas, int M) {
  std::vector<ArcEigenRow> out;
  for (const Rational& a : alphas) {
    if (a.den <= 0 || a.num <= 0 || a.num >= a.den) {
      throw Error(ErrorCode::AlphaOutOfRange, "arc fraction must lie in (0, 1)");
    }
    ArcEigenRow row;
    const long long gcd_a = std::gcd(a.num, a.den);
    row.alpha = {a.num / gcd_a, a.den / gcd_a};
    // 1/(2α) + 1/(2(1-α)) = q^2 / (2 p (q - p)) for α = p/q.
    const long long p = row.alpha.num, q = row.alpha.den;
    long long bn = q * q;
    long long bd = 2 * p * (q - p);
    const long long gb = std::gcd(bn, bd);
    row.bound = {bn / gb, bd / gb};
    row.bound_value = static_cast<double>(row.bound.num) / static_cast<double>(row.bound.den);
    const double alpha = static_cast<double>(p) / static_cast<double>(q);
    row.exact = 1.0 / (2.0 * alpha);
    row.M = M;
    const double step = 2.0 * std::numbers::pi * alpha / (M + 1);
    const double d = 2.0 / (step * step);
    const double e = -1.0 / (step * step);
    // Sturm count of eigenvalues below x for the constant tridiagonal matrix.
    auto below = [&](double x) {
      int count = 0;
      double q_prev = d - x;
      if (q_prev < 0.0) ++count;
      for (int m = 1; m < M; ++m) {
        if (q_prev == 0.0) q_prev = 1e-300;
        const double qm = d - x - e * e / q_prev;
        if (qm < 0.0) ++count;
        q_prev = qm;
      }
      return count;
    };
    double lo = 0.0;
    double hi = 4.0 / (step * step);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (below(mid) >= 1 ? hi : lo) = mid;
    }
    row.sqrt_mu = std::sqrt(0.5 * (lo + hi));
    row.rel_error = std::abs(row.sqrt_mu - row.exact) / row.exact;
    out.push_back(row);
  }
  return out;
}

ExclusionProbe two_component_exclusion_probe(const SolutionSweep& sweep, Point xc, std::span<const double> eps,
                                             double rho) {
  ExclusionProbe out;
  out.xc = xc;
  out.rho = rho;
  for (double e : eps) out.levels.push_back({e, {}, {}, {}, {}});
  for (std::size_t si = 0; si < sweep.size(); ++si) {
    const Solution& s = *sweep[si];
    const Grid2D& g = s.u.grid();
    const double h = g.h();
    if (!g.contains_ball(xc, rho)) throw Error(ErrorCode::WindowOutsideGrid, "probe window leaves the grid");
    for (auto& level : out.levels) {
      const double inner = level.eps * rho;
      std::vector<std::uint8_t> mask(g.size(), 0);
      for (std::size_t k = 0; k < g.size(); ++k) {
        const double d = distance(g.node(k), xc);
        mask[k] = s.positive[k] && d > inner && d <= rho;
      }
      const RegionDecomposition dec = label_components(g, mask);
      std::vector<std::uint8_t> touching(g.size(), 0);
      std::size_t count = 0;
      for (const auto& c : dec.positive_components) {
        bool reach = false;
        for (std::size_t k : c.nodes) reach = reach || distance(g.node(k), xc) <= inner + h;
        if (!reach) continue;
        ++count;
        for (std::size_t k : c.nodes) touching[k] = 1;
      }
      level.counts.push_back(count);
      if (si + 1 == sweep.size() && count == 2) {
        const RegionDecomposition two = label_components(g, touching);
        std::vector<double> radii;
        for (int m = 1; m <= 8; ++m) radii.push_back(inner + (rho - inner) * m / 9.0);
        for (const auto& t : angular_traces(two, xc, radii)) {
          level.trace_r.push_back(t.r);
          level.t1.push_back(t.t1);
          level.t2.push_back(t.t2);
        }
      }
    }
  }
  for (const auto& level : out.levels) {
    bool all = !level.counts.empty();
    for (std::size_t c : level.counts) all = all && c >= 2;
    out.finding = out.finding || all;
  }
  return out;
}

CheckRecord exclusion_record(const std::string& name, const std::vector<ExclusionProbe>& probes) {
  CheckRecord rec;
  rec.name = name;
  rec.statement = "near a free-boundary point the positivity set reaches small scales through one component only";
  nlohmann::json list = nlohmann::json::array();
  bool finding = false;
  for (const auto& p : probes) {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& l : p.levels) {
      nlohmann::json lj = {{"eps", l.eps}, {"counts", l.counts}};
      if (!l.trace_r.empty()) lj["traces"] = {{"r", l.trace_r}, {"t1", l.t1}, {"t2", l.t2}};
      levels.push_back(lj);
    }
    list.push_back({{"xc", {p.xc.x, p.xc.y}}, {"rho", p.rho}, {"levels", levels}, {"finding", p.finding}});
    finding = finding || p.finding;
  }
  rec.measured = {{"probes", list}};
  rec.tolerance = {{"persist_across_all_grids", true}};
  rec.verdict = finding ? Verdict::Finding : Verdict::Pass;
  return rec;
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json checks_j = nlohmann::json::array();
  for (const auto& c : checks) {
    checks_j.push_back({{"name", c.name},
                        {"statement", c.statement},
                        {"verdict", to_string(c.verdict)},
                        {"measured", c.measured},
                        {"tolerance", c.tolerance},
                        {"sweep", c.sweep},
                        {"detail", c.detail}});
  }
  return {{"checks", checks_j},
          {"summary", {{"pass", pass}, {"fail", fail}, {"finding", finding}}},
          {"environment", {{"h", env.h}, {"spec_hash", env.spec_hash}, {"solver", env.solver}}},
          {"artifacts", artifacts}};
}

std::string VerificationReport::dump() const { return to_json().dump(2) + "\n"; }

VerificationReport assemble_report(std::vector<CheckRecord> records, Environment env) {
  if (records.empty()) throw Error(ErrorCode::InvalidUsage, "report needs at least one check");
  std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  VerificationReport out;
  for (const auto& r : records) {
    if (r.verdict == Verdict::Pass) ++out.pass;
    if (r.verdict == Verdict::Fail) ++out.fail;
    if (r.verdict == Verdict::Finding) ++out.finding;
  }
  out.checks = std::move(records);
  out.env = std::move(env);
  return out;
}

std::string spec_hash(const ProblemSpec& spec) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "D=%.17g,%.17g,%.17g;lambda=%.17g;Lambda=%.17g;rect=%.17g,%.17g,%.17g,%.17g;",
                spec.D.center.x, spec.D.center.y, spec.D.radius, spec.lambda, spec.Lambda, spec.rect.x0, spec.rect.y0,
                spec.rect.x1, spec.rect.y1);
  const std::string text = std::string(buf) + "g=" + spec.g_text + ";f=" + spec.f_text;
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016" PRIx64, hash);
  return out;
}

}  // namespace fbp
