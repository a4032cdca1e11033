#include <cmath>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

#include "fbp/field_io.hpp"
#include "fbp/grid.hpp"
#include "fbp/operators.hpp"

using namespace fbp;

TEST_CASE("make_grid counts nodes") {
  const Grid2D a = make_grid({-2, -2, 2, 2}, 1.0);
  CHECK(a.nx() == 5);
  CHECK(a.ny() == 5);
  const Grid2D b = make_grid({0, 0, 1, 1}, 0.01);
  CHECK(b.nx() == 101);
  CHECK(b.ny() == 101);
  CHECK(b.node(100, 100).x == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("make_grid rejects bad input") {
  require_code(ErrorCode::NonPositiveSpacing, [] { make_grid({-2, -2, 2, 2}, 0.0); });
  require_code(ErrorCode::NonPositiveSpacing, [] { make_grid({-2, -2, 2, 2}, -0.1); });
  require_code(ErrorCode::RectTooSmall, [] { make_grid({0, 0, 0.2, 1}, 0.1); });
}

TEST_CASE("node positions come from integers") {
  const Grid2D g = make_grid({-2.5, -2.5, 2.5, 2.5}, 1.0 / 128);
  CHECK(g.node(640, 0).x == -2.5 + 640 * (1.0 / 128));
  const auto [i, j] = g.nearest({0.0, 0.0});
  CHECK(g.node(i, j) == Point{0.0, 0.0});
}

TEST_CASE("discrete laplacian is exact on quadratics") {
  const Grid2D g = make_grid({-1, -1, 1, 1}, 0.1);
  const ScalarField u = sample_field(g, [](Point p) { return p.x * p.x + 3 * p.y * p.y - p.x * p.y; });
  const ScalarField L = discrete_laplacian(u);
  for (int j = 1; j < g.ny() - 1; ++j) {
    for (int i = 1; i < g.nx() - 1; ++i) CHECK(L(i, j) == doctest::Approx(8.0).epsilon(1e-9));
  }
  CHECK(L(0, 0) == 0.0);
}

TEST_CASE("discrete laplacian needs neighbours") {
  const Grid2D g = make_grid({-1, -1, 1, 1}, 0.5);
  const ScalarField u(g, 1.0);  // edge nodes left INTERIOR
  require_code(ErrorCode::MissingNeighbor, [&] { discrete_laplacian(u); });
}

TEST_CASE("gradient magnitude of a linear function") {
  const Grid2D g = make_grid({-1, -1, 1, 1}, 0.1);
  const ScalarField u = sample_field(g, [](Point p) { return 3 * p.x + 4 * p.y; });
  const ScalarField G = gradient_magnitude(u);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(G[k] == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("dirichlet solve reproduces harmonic data") {
  const Grid2D g = make_grid({-1, -1, 1, 1}, 0.05);
  const auto exact = [](Point p) { return p.x * p.x - p.y * p.y + 2 * p.x; };
  ScalarField data = sample_field(g, exact);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (data.tag(k) == NodeTag::Interior) data[k] = 0.0;
  }
  const ScalarField u = solve_dirichlet_harmonic(data, 1e-11);
  double err = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) err = std::max(err, std::abs(u[k] - exact(g.node(k))));
  CHECK(err < 1e-8);
}

TEST_CASE("cut arms carry boundary values") {
  // u = x on [0, 1] with the right boundary cut at x = 0.45 from node 0.4.
  const Grid2D g = make_grid({0, 0, 1, 1}, 0.1);
  ScalarField u = sample_field(g, [](Point p) { return p.x; });
  for (int j = 1; j < g.ny() - 1; ++j) {
    for (int i = 5; i < g.nx() - 1; ++i) u.set_tag(i, j, NodeTag::Outside);
    for (int i = 1; i < 5; ++i) u(i, j) = 0.0;
  }
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 5; i < g.nx(); ++i) u.set_tag(i, j, NodeTag::Outside);
  }
  LaplaceSystem sys(u);
  for (int j = 1; j < g.ny() - 1; ++j) sys.add_cut(g.index(4, j), kEast, 0.5, 0.45);
  // Top and bottom rows of the kept block are DIRICHLET already.
  const SolveStats st = sys.solve(u, 1e-12, 100000);
  CHECK(st.converged);
  for (int j = 1; j < g.ny() - 1; ++j) {
    for (int i = 1; i < 5; ++i) CHECK(u(i, j) == doctest::Approx(g.node(i, j).x).epsilon(1e-9));
  }
}

TEST_CASE("field CSV round trip is exact") {
  const Grid2D g = make_grid({-1, -0.5, 1, 0.5}, 0.1);
  const ScalarField u = sample_field(g, [](Point p) { return std::sin(3 * p.x) * std::exp(p.y) / 7.0; });
  std::stringstream ss;
  write_field_csv(ss, u);
  const ScalarField v = read_field_csv(ss);
  CHECK(v.grid().same_as(g));
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(v[k] == u[k]);
  CHECK(v.tag(0) == NodeTag::Dirichlet);
  CHECK(v.tag(g.index(3, 3)) == NodeTag::Interior);
}

TEST_CASE("field CSV rejects junk") {
  std::stringstream ss("nx,ny,h,origin_x,origin_y\n3,3,1,0,0\n1,2,3\n4,x,6\n7,8,9\n");
  require_code(ErrorCode::IoFailure, [&] { read_field_csv(ss); });
  require_code(ErrorCode::IoFailure, [] { load_field_csv("/nonexistent/field.csv"); });
}
