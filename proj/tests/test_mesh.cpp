#include <doctest.h>

#include <cmath>

#include "mde/errors.hpp"
#include "mde/mesh.hpp"

using namespace mde;

TEST_SUITE("mesh") {

TEST_CASE("step sizes follow N") {
  const Mesh m(4, 1, 1.0);
  CHECK(m.dt() == 0.25);
  CHECK(m.dv() == 0.25);
  CHECK(m.dx() == 0.0625);
  CHECK(m.time_points() == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
}

TEST_CASE("final partial interval ends exactly at T") {
  const Mesh m(4, 1, 0.6);
  const auto& t = m.time_points();
  REQUIRE(t.size() == 4);
  CHECK(t.back() == 0.6);
  CHECK(m.steps().back() == doctest::Approx(0.1));
  CHECK(m.steps()[0] == 0.25);
  CHECK(m.is_mesh_time(0.5));
  CHECK(m.is_mesh_time(0.6));
  CHECK_FALSE(m.is_mesh_time(0.3));
  CHECK(m.index_at_or_before(0.49) == 1);
  CHECK(m.index_at_or_before(0.5) == 2);
  CHECK(m.nearest_index(0.58) == 3);
}

TEST_CASE("cells are half-open and floor toward -inf") {
  const Mesh m(2, 1, 1.0);  // dx = 1/4
  CHECK(space_cell({0.3}, m) == CellIndex{1});
  CHECK(space_cell({0.25}, m) == CellIndex{1});
  CHECK(space_cell({-0.01}, m) == CellIndex{-1});
  CHECK(space_cell({-0.25}, m) == CellIndex{-1});
  // Right end of the domain lands on the last lattice point.
  CHECK(space_cell({2.0}, m) == CellIndex{8});
  CHECK(velocity_cell({0.75}, m) == CellIndex{1});
  CHECK(space_point({-3}, m) == Point{-0.75});
}

TEST_CASE("values a rounding error below a lattice point snap to it") {
  CHECK(lattice_index(0.1 * 3.0, 10) == 3);  // 3.0000000000000004
  CHECK(lattice_index(0.7 - 0.4, 10) == 3);  // 2.9999999999999996, floor would give 2
  CHECK(lattice_index(0.29, 10) == 2);
  CHECK(lattice_index(-0.01, 10) == -1);
}

TEST_CASE("atoms outside [-N, N] are rejected with the offending coordinate") {
  const Mesh m(2, 2, 1.0);
  try {
    space_cell({0.0, 2.5}, m, 7);
    FAIL("expected AtomOutsideMesh");
  } catch (const AtomOutsideMesh& e) {
    CHECK(e.atom == 7);
    CHECK(e.coordinate == 2.5);
    CHECK(e.n == 2);
    CHECK(e.grid == AtomOutsideMesh::Grid::Space);
  }
  CHECK_THROWS_AS(velocity_cell({-2.1, 0.0}, m), AtomOutsideMesh);
}

TEST_CASE("projection keeps mass and moves each atom down to its cell corner") {
  const Mesh m(4, 2, 1.0);
  const DiscreteMeasure mu(2, {{{0.1, -0.1}, 0.5}, {{0.11, -0.09}, 0.25}, {{1.0, 1.0}, 0.25}});
  const auto p = grid_project_x(mu, m);
  CHECK(total_mass(p) == doctest::Approx(1.0).epsilon(1e-15));
  // The first two atoms share the cell [1/16, 2/16) x [-2/16, -1/16).
  REQUIRE(p.size() == 2);
  CHECK(p[0].location == Point{0.0625, -0.125});
  CHECK(p[0].weight == 0.75);
  CHECK(p[1].location == Point{1.0, 1.0});
}

TEST_CASE("phase cells aggregate mass by (x, v) cell") {
  const Mesh m(2, 1, 1.0);
  const VelocityMeasure v(1, {{{0.1}, {0.6}, 1.0}, {{0.2}, {0.9}, 2.0}, {{0.2}, {-0.1}, 0.5}});
  const auto cells = phase_cells(v, m);
  REQUIRE(cells.size() == 2);
  CHECK(cells[0].x == CellIndex{0});
  CHECK(cells[0].v == CellIndex{-1});
  CHECK(cells[0].mass == 0.5);
  CHECK(cells[1].v == CellIndex{1});
  CHECK(cells[1].mass == 3.0);
  const auto projected = grid_project_xv(v, m);
  CHECK(total_mass(projected) == 3.5);
}

}  // TEST_SUITE
