#include "fbp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fbp/error.hpp"
#include "fbp/operators.hpp"

namespace fbp {

namespace {
constexpr double kPi = std::numbers::pi;
}

double poisson_disk_eval(std::span<const double> trace, Point x) {
  const double rr = dot(x, x);
  if (!(rr < 1.0)) throw Error(ErrorCode::PointNotInterior, "poisson kernel needs |x| < 1");
  if (trace.empty()) throw Error(ErrorCode::InvalidUsage, "empty boundary trace");
  const std::size_t m = trace.size();
  const double dtheta = 2.0 * kPi / static_cast<double>(m);
  double sum = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double t = dtheta * static_cast<double>(k);
    const double dx = x.x - std::cos(t);
    const double dy = x.y - std::sin(t);
    sum += trace[k] / (dx * dx + dy * dy);
  }
  return (1.0 - rr) / (2.0 * kPi) * sum * dtheta;
}

double poisson_disk_eval(const std::function<double(double)>& trace, int samples, Point x) {
  if (samples < 1) throw Error(ErrorCode::InvalidUsage, "need at least one sample");
  std::vector<double> v(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) v[static_cast<std::size_t>(k)] = trace(2.0 * kPi * k / samples);
  return poisson_disk_eval(v, x);
}

GreenEval green_value_and_flux(const GreenDisk& g, Point y, int samples) {
  const double d = distance(y, g.center);
  if (d == 0.0) throw Error(ErrorCode::PoleEvaluation, "Green function evaluated at its pole");
  GreenEval out;
  out.value = std::log(d / g.r) / (2.0 * kPi);
  out.flux.assign(static_cast<std::size_t>(std::max(samples, 1)), 1.0 / (2.0 * kPi * g.r));
  return out;
}

namespace {

// Antiderivative of ln sqrt(x^2 + y^2) in both variables.
double log_antiderivative(double x, double y) {
  const double rr = x * x + y * y;
  if (rr == 0.0) return 0.0;
  double v = x * y * (std::log(rr) - 3.0) / 2.0;
  if (x != 0.0) v += 0.5 * x * x * std::atan(y / x);
  if (y != 0.0) v += 0.5 * y * y * std::atan(x / y);
  return v;
}

}  // namespace

double log_integral_rect(double ax, double bx, double ay, double by) {
  return log_antiderivative(bx, by) - log_antiderivative(ax, by) - log_antiderivative(bx, ay) +
         log_antiderivative(ax, ay);
}

double green_identity_residual(const ScalarField& u, Point x0, double r) {
  const Grid2D& g = u.grid();
  if (!(r > 0.0) || !g.contains_ball(x0, r)) {
    throw Error(ErrorCode::BallOutsideGrid, "ball of radius " + std::to_string(r) + " leaves the grid");
  }
  const double h = g.h();
  const int m = std::max(64, static_cast<int>(std::ceil(2.0 * kPi * r / h)));
  double mean = 0.0;
  for (int k = 0; k < m; ++k) {
    const double t = 2.0 * kPi * k / m;
    mean += u.sample({x0.x + r * std::cos(t), x0.y + r * std::sin(t)});
  }
  mean /= m;  // ∮ u G_ν ds with G_ν = 1/(2πr)

  // Laplacian only where the field has a full stencil.
  const double inv = 1.0 / (h * h);
  const auto [pi, pj] = g.nearest(x0);
  const auto [fx, fy] = g.coords(x0);
  const int i0 = std::max(1, static_cast<int>(std::floor(fx - r / h)) - 1);
  const int i1 = std::min(g.nx() - 2, static_cast<int>(std::ceil(fx + r / h)) + 1);
  const int j0 = std::max(1, static_cast<int>(std::floor(fy - r / h)) - 1);
  const int j1 = std::min(g.ny() - 2, static_cast<int>(std::ceil(fy + r / h)) + 1);
  double area = 0.0;
  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) {
      const Point p = g.node(i, j);
      if (distance(p, x0) >= r) continue;
      bool ok = u.tag(i, j) != NodeTag::Outside;
      for (int d = 0; d < 4 && ok; ++d) ok = u.tag(i + kDi[d], j + kDj[d]) != NodeTag::Outside;
      if (!ok) continue;
      const double lu = (u(i + 1, j) + u(i - 1, j) + u(i, j + 1) + u(i, j - 1) - 4.0 * u(i, j)) * inv;
      double gint;
      if (i == pi && j == pj) {
        const double ax = p.x - h / 2 - x0.x;
        const double ay = p.y - h / 2 - x0.y;
        gint = (log_integral_rect(ax, ax + h, ay, ay + h) - h * h * std::log(r)) / (2.0 * kPi);
      } else {
        gint = std::log(distance(p, x0) / r) / (2.0 * kPi) * h * h;
      }
      area += gint * lu;
    }
  }
  return std::abs(u.sample(x0) - mean - area);
}

}  // namespace fbp
