#include "fbp/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "fbp/error.hpp"
#include "fbp/kernels.hpp"

namespace fbp {

namespace {

constexpr double kPi = std::numbers::pi;

// Bisection for g0 / (R ln(R/r)) = target; the left side falls monotonically.
double flux_root(double r, double g0, double target) {
  auto excess = [&](double R) { return g0 / (R * std::log(R / r)) - target; };
  double lo = r * (1.0 + 1e-6);
  double hi = 50.0 * r;
  if (excess(hi) > 0.0) {
    throw Error(ErrorCode::NoRootInBracket, "flux stays above target on [r, 50 r]");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double RadialSolution::operator()(Point x) const {
  const double d = distance(x, center);
  if (d >= R) return 0.0;
  return std::max(0.0, g0 * std::log(d / R) / std::log(r_in / R));
}

double RadialSolution::slope(double rho) const { return g0 / (rho * std::log(R / r_in)); }

RadialSolution radial_solution(double r_in, double g0, double f0, Point center) {
  if (!(r_in > 0.0) || !(g0 > 0.0) || !(f0 > 0.0)) {
    throw Error(ErrorCode::SpecInvalid, "radial solution needs r_in, g0, f0 > 0");
  }
  return RadialSolution{center, r_in, flux_root(r_in, g0, std::sqrt(f0)), g0, f0};
}

double SupersolutionBarrier::operator()(Point x) const {
  const double d = distance(x, center);
  if (d >= R0) return 0.0;
  return g_max * std::log(d / R0) / std::log(r / R0);
}

SupersolutionBarrier supersolution_barrier(double r, double lambda, double g_max, Point center) {
  if (!(r > 0.0) || !(lambda > 0.0) || !(g_max > 0.0)) {
    throw Error(ErrorCode::SpecInvalid, "barrier needs r, λ, g_max > 0");
  }
  return SupersolutionBarrier{center, r, flux_root(r, g_max, std::sqrt(lambda)), lambda, g_max};
}

double SectorHarmonic::eval(double r, double theta) const {
  return std::pow(r, alpha / 2.0) * std::cos(alpha / 2.0 * (theta + kPi / alpha));
}

double SectorHarmonic::operator()(Point p) const {
  const double r = norm(p);
  if (r == 0.0) return 0.0;
  double t = std::atan2(p.y, p.x);
  const double lo = -2.0 * kPi / alpha;
  while (t < lo) t += 2.0 * kPi;
  while (t >= lo + 2.0 * kPi) t -= 2.0 * kPi;
  return eval(r, t);
}

double SectorHarmonic::positive_part(Point p) const {
  const double r = norm(p);
  if (r == 0.0) return 0.0;
  double t = std::atan2(p.y, p.x);
  const double lo = -2.0 * kPi / alpha;
  while (t < lo) t += 2.0 * kPi;
  while (t >= lo + 2.0 * kPi) t -= 2.0 * kPi;
  if (t <= lo || t >= 0.0) return 0.0;
  return std::max(0.0, eval(r, t));
}

SectorHarmonic sector_harmonic(double alpha) {
  if (!(alpha >= 1.0)) throw Error(ErrorCode::AlphaOutOfRange, "sector harmonic needs α >= 1");
  return SectorHarmonic{alpha};
}

SlopeBound planar_barrier_slope_bound(PlaneKind kind, double delta, double step) {
  if (!(delta > 0.0 && delta < 0.5)) {
    throw Error(ErrorCode::DeltaOutOfRange, "δ must lie in (0, 1/2), got " + std::to_string(delta));
  }
  SlopeBound out;
  std::function<double(double)> trace;
  if (kind == PlaneKind::SinglePlane) {
    out.x0 = {std::sqrt(1.0 - delta * delta), -delta};
    trace = [](double t) { return std::max(0.0, std::sin(t)); };
  } else {
    out.x0 = {1.0, 0.0};
    trace = [delta](double t) { return std::max(0.0, std::abs(std::sin(t)) - delta); };
  }
  out.normal = -1.0 * out.x0;
  // Resolve the kernel width at the smaller step with about 20 samples.
  const int m = std::max(4096, static_cast<int>(std::ceil(40.0 * kPi / (step / 2.0))));
  std::vector<double> samples(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) samples[static_cast<std::size_t>(k)] = trace(2.0 * kPi * k / m);
  auto quotient = [&](double s) { return poisson_disk_eval(samples, out.x0 + s * out.normal) / s; };
  out.quotient_s = quotient(step);
  out.quotient_s2 = quotient(step / 2.0);
  out.value = 2.0 * out.quotient_s2 - out.quotient_s;
  return out;
}

}  // namespace fbp
