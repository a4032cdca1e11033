#include "fbp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fbp/error.hpp"

namespace fbp {

Point Disk::project(Point p) const {
  const Point d = p - center;
  const double n = norm(d);
  if (n == 0.0) return center + Point{radius, 0.0};
  return center + (radius / n) * d;
}

void validate_spec(const ProblemSpec& spec, int samples_per_side) {
  if (!spec.g || !spec.f) throw Error(ErrorCode::SpecInvalid, "g and f must be set");
  if (!(spec.lambda > 0.0) || !(spec.Lambda >= spec.lambda)) {
    throw Error(ErrorCode::SpecInvalid, "need 0 < lambda <= Lambda");
  }
  if (!(spec.D.radius > 0.0)) throw Error(ErrorCode::SpecInvalid, "D radius must be positive");
  const Rect& r = spec.rect;
  const Point c = spec.D.center;
  const double rad = spec.D.radius;
  if (!(c.x - rad > r.x0 && c.x + rad < r.x1 && c.y - rad > r.y0 && c.y + rad < r.y1)) {
    throw Error(ErrorCode::SpecInvalid, "D must lie strictly inside the rectangle");
  }
  if (!spec.D.contains({0.0, 0.0})) throw Error(ErrorCode::SpecInvalid, "D must contain the origin");
  const int n = std::max(2, samples_per_side);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Point p{r.x0 + (r.x1 - r.x0) * i / (n - 1), r.y0 + (r.y1 - r.y0) * j / (n - 1)};
      const double v = spec.f(p);
      const double slack = 1e-12 * spec.Lambda;
      if (!std::isfinite(v) || v < spec.lambda - slack || v > spec.Lambda + slack) {
        throw Error(ErrorCode::SpecInvalid, "f = " + std::to_string(v) + " at (" + std::to_string(p.x) + ", " +
                                                std::to_string(p.y) + ") violates lambda <= f <= Lambda");
      }
    }
  }
  for (int k = 0; k < 720; ++k) {
    const double t = 2.0 * std::numbers::pi * k / 720;
    const double v = spec.g(c + rad * Point{std::cos(t), std::sin(t)});
    if (!std::isfinite(v) || v < 0.0) throw Error(ErrorCode::SpecInvalid, "g must be nonnegative on the boundary of D");
  }
}

double g_max(const ProblemSpec& spec, int samples) {
  double m = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double t = 2.0 * std::numbers::pi * k / samples;
    m = std::max(m, spec.g(spec.D.center + spec.D.radius * Point{std::cos(t), std::sin(t)}));
  }
  return m;
}

SupersolutionBarrier spec_barrier(const ProblemSpec& spec) {
  const double r = norm(spec.D.center) + spec.D.radius;
  return supersolution_barrier(r, spec.lambda, std::max(g_max(spec), 1e-300));
}

ProblemSpec radial_spec(double f0, double half) {
  ProblemSpec s;
  s.D = Disk{{0.0, 0.0}, 1.0};
  s.g = [](Point) { return 1.0; };
  s.f = [f0](Point) { return f0; };
  s.lambda = f0;
  s.Lambda = f0;
  s.rect = Rect{-half, -half, half, half};
  s.g_text = "1";
  s.f_text = std::to_string(f0);
  return s;
}

ProblemSpec modulated_spec(double half) {
  ProblemSpec s;
  s.D = Disk{{0.0, 0.0}, 1.0};
  s.g = [](Point) { return 1.0; };
  s.f = [](Point p) { return 2.0 + 0.5 * std::sin(4.0 * std::atan2(p.y, p.x)); };
  s.lambda = 1.5;
  s.Lambda = 2.5;
  s.rect = Rect{-half, -half, half, half};
  s.g_text = "1";
  s.f_text = "2 + 0.5*sin(4*atan2(y, x))";
  return s;
}

double positivity_threshold(const ProblemSpec& spec) { return 1e-12 * g_max(spec); }

}  // namespace fbp
