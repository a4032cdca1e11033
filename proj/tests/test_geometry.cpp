#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "support.hpp"

#include "fbp/barriers.hpp"
#include "fbp/geometry.hpp"

using namespace fbp;

namespace {

std::vector<std::uint8_t> mask_of(const Grid2D& g, auto&& pred) {
  std::vector<std::uint8_t> m(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) m[k] = pred(g.node(k)) ? 1 : 0;
  return m;
}

constexpr double kR = 1.5692542646770047;

}  // namespace

TEST_CASE("labels: disk, ring and checkerboard") {
  const Grid2D g = make_grid({-2, -2, 2, 2}, 0.05);
  const auto ring = mask_of(g, [](Point p) { return norm(p) > 0.8 && norm(p) < 1.2; });
  const RegionDecomposition d = label_components(g, ring);
  CHECK(d.positive_components.size() == 1);
  // Inside hole plus outside.
  CHECK(d.zero_components.size() == 2);

  // Diagonal neighbours do not join positive nodes.
  const Grid2D s = make_grid({0, 0, 1, 1}, 0.25);
  std::vector<std::uint8_t> diag(s.size(), 0);
  diag[s.index(1, 1)] = diag[s.index(2, 2)] = 1;
  CHECK(label_components(s, diag).positive_components.size() == 2);
}

TEST_CASE("labels are stable under whole-cell translation") {
  const Grid2D g = make_grid({-2, -2, 2, 2}, 0.05);
  auto blobs = [&](int di, int dj) {
    std::vector<std::uint8_t> m(g.size(), 0);
    for (int j = 0; j < g.ny(); ++j) {
      for (int i = 0; i < g.nx(); ++i) {
        const int a = i - di - 50, b = j - dj - 50;
        const bool in = (a - 10) * (a - 10) + (b - 6) * (b - 6) < 64 || (a + 12) * (a + 12) + (b + 12) * (b + 12) < 36;
        m[g.index(i, j)] = in;
      }
    }
    return m;
  };
  const RegionDecomposition a = label_components(g, blobs(0, 0));
  const RegionDecomposition b = label_components(g, blobs(5, 2));
  REQUIRE(a.positive_components.size() == 2);
  REQUIRE(a.positive_components.size() == b.positive_components.size());
  for (std::size_t c = 0; c < a.positive_components.size(); ++c) {
    const auto& na = a.positive_components[c].nodes;
    const auto& nb = b.positive_components[c].nodes;
    REQUIRE(na.size() == nb.size());
    for (std::size_t m = 0; m < na.size(); ++m) CHECK(nb[m] == na[m] + g.index(5, 2));
  }
}

TEST_CASE("distance transform is exact") {
  const Grid2D g = make_grid({0, 0, 1, 1}, 0.1);
  std::vector<std::uint8_t> t(g.size(), 0);
  t[g.index(2, 3)] = 1;
  const auto d = distance_transform(g, t);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(d[k] == doctest::Approx(distance(g.node(k), g.node(2, 3))));
  const auto none = distance_transform(g, std::vector<std::uint8_t>(g.size(), 0));
  CHECK(std::isinf(none[0]));
}

TEST_CASE("tangent balls on a straight edge") {
  const Grid2D g = make_grid({-1, -1, 1, 1}, 1.0 / 64);
  const auto pos = mask_of(g, [](Point p) { return p.y > 0.0; });
  const std::vector<double> radii{0.05, 0.1, 0.2, 0.4};
  for (Side side : {Side::Exterior, Side::Interior}) {
    const auto recs = find_tangent_balls(g, pos, {0.0, 0.0}, radii, side);
    for (const auto& r : recs) {
      CHECK(r.found);
      CHECK(r.opposite_inside <= 1);
    }
  }
  require_code(ErrorCode::PointNotOnBoundary, [&] { find_tangent_balls(g, pos, {0.0, 0.5}, radii, Side::Exterior); });
}

TEST_CASE("density on a half-plane, a circle and deep inside") {
  const Grid2D g = make_grid({-2.5, -2.5, 2.5, 2.5}, 1.0 / 128);
  const auto half = mask_of(g, [](Point p) { return p.y > 1e-9; });
  const std::vector<double> radii{0.05, 0.1, 0.2};
  for (const auto& d : density_profile(g, half, {0.0, 0.0}, radii)) {
    CHECK(std::abs(d.positive_fraction - 0.5) <= g.h() / d.r);
    CHECK(std::abs(d.zero_fraction - 0.5) <= g.h() / d.r);
  }
  const auto disk = mask_of(g, [](Point p) { return norm(p) < kR; });
  const double r = 0.2;
  const auto d = density_profile(g, disk, {kR, 0.0}, std::vector<double>{r}).front();
  CHECK(d.positive_fraction >= 0.4);
  CHECK(d.positive_fraction <= 0.6);
  CHECK(d.zero_fraction >= 0.4);
  CHECK(d.zero_fraction <= 0.6);
  const auto in = density_profile(g, disk, {0.2, 0.0}, std::vector<double>{0.5}).front();
  CHECK(in.positive_fraction == doctest::Approx(1.0).epsilon(0.01));
  CHECK(in.zero_fraction == 0.0);
  require_code(ErrorCode::BallOutsideGrid,
               [&] { density_profile(g, disk, {2.4, 0.0}, std::vector<double>{0.5}); });
}

TEST_CASE("box counting: circle, square and a single node") {
  const double h = 1.0 / 128;
  const Grid2D g = make_grid({-2.5, -2.5, 2.5, 2.5}, h);
  const RegionDecomposition c = label_components(g, mask_of(g, [](Point p) { return norm(p) < kR; }));
  const auto circle = perimeter_boxcount(g, c.positive_components.front(), std::vector<double>{8 * h, 16 * h, 32 * h});
  for (const auto& b : circle) CHECK(std::abs(b.length - 2 * std::numbers::pi * kR) <= 0.2 * 2 * std::numbers::pi * kR);
  for (std::size_t k = 1; k < circle.size(); ++k) {
    CHECK(std::abs(circle[k].length / circle[k - 1].length - 1.0) <= 0.35);
  }

  const RegionDecomposition s =
      label_components(g, mask_of(g, [](Point p) { return std::abs(p.x) < 0.5 && std::abs(p.y) < 0.5; }));
  for (const auto& b : perimeter_boxcount(g, s.positive_components.front(), std::vector<double>{8 * h, 16 * h})) {
    CHECK(std::abs(b.length - 4.0) <= 0.8);
  }

  Component one;
  one.nodes = {g.index(10, 10)};
  for (const auto& b : perimeter_boxcount(g, one, std::vector<double>{0.01, 0.1, 1.0})) CHECK(b.count == 1);
  require_code(ErrorCode::EmptyComponent, [&] { perimeter_boxcount(g, Component{}, std::vector<double>{0.1}); });
}

namespace {

// Two labelled regions covering every node: label 0 where in_first holds.
RegionDecomposition complementary(const Grid2D& g, auto&& in_first) {
  RegionDecomposition d = label_components(g, std::vector<std::uint8_t>(g.size(), 1));
  d.positive_components.assign(2, Component{});
  for (std::size_t k = 0; k < g.size(); ++k) {
    const int l = in_first(g.node(k)) ? 0 : 1;
    d.positive_label[k] = l;
    d.positive_components[static_cast<std::size_t>(l)].nodes.push_back(k);
  }
  return d;
}

}  // namespace

TEST_CASE("angular traces") {
  // Circles through the cell centres avoid ties at the nearest-node lookup.
  const double h = 1.0 / 128;
  const Grid2D g = make_grid({-1 - h / 2, -1 - h / 2, 1 + h / 2, 1 + h / 2}, h);
  const int M = 720;
  const std::vector<double> radii{0.2, 0.5, 0.8};
  const auto halves = complementary(g, [](Point p) { return p.y > 0.0; });
  for (const auto& t : angular_traces(halves, {0.0, 0.0}, radii, M)) {
    CHECK(std::abs(t.t1 - 1.0) <= 2.0 / M + 1e-12);
    CHECK(std::abs(t.t2 - 1.0) <= 2.0 / M + 1e-12);
  }
  const auto q = complementary(g, [](Point p) { return p.x > 0.0 && p.y > 0.0; });
  for (const auto& t : angular_traces(q, {0.0, 0.0}, radii, M)) {
    CHECK(std::abs(t.t1 - 0.5) <= 2.0 / M + 1e-12);
    CHECK(std::abs(t.t2 - 1.5) <= 2.0 / M + 1e-12);
  }
  const auto one = label_components(g, mask_of(g, [](Point p) { return norm(p) < 0.9; }));
  require_code(ErrorCode::ComponentCountMismatch, [&] { angular_traces(one, {0.0, 0.0}, radii, M); });
}

TEST_CASE("zero audit: clean circle and planted island") {
  const Grid2D g = make_grid({-2.5, -2.5, 2.5, 2.5}, 1.0 / 128);
  const auto disk = mask_of(g, [](Point p) { return norm(p) < kR; });
  const ZeroAudit clean = zero_component_audit(g, disk, Disk{{kR, 0.0}, 0.6});
  CHECK(clean.interior.empty());
  CHECK(clean.inscribed_radius >= 0.1);

  const Point island{1.3, 0.0};
  const auto holed = mask_of(g, [&](Point p) { return norm(p) < kR && distance(p, island) > 0.06; });
  const ZeroAudit a = zero_component_audit(g, holed, Disk{{kR, 0.0}, 0.6});
  REQUIRE(a.interior.size() == 1);
  CHECK(distance(a.interior.front().centroid, island) <= g.h());
  require_code(ErrorCode::BallOutsideGrid, [&] { zero_component_audit(g, disk, Disk{{2.2, 0.0}, 0.6}); });
}
