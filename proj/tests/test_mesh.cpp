#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "avalanche/mesh.hpp"

using namespace avalanche;

namespace {

TriMesh unit_square() {
  return TriMesh::from_triangles({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}});
}

}  // namespace

TEST_CASE("reference triangle") {
  const TriMesh m = load_mesh("3 1\n0 0 0\n1 1 0\n2 0 1\n0 0 1 2\n");
  REQUIRE(m.num_cells() == 1);
  CHECK(m.cell(0).area == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.num_edges() == 3);
  for (const Edge& e : m.edges()) CHECK(e.boundary());
}

TEST_CASE("two triangles share one interior edge") {
  const TriMesh m = unit_square();
  int interior = 0;
  for (const Edge& e : m.edges()) {
    if (e.boundary()) continue;
    ++interior;
    CHECK(e.left == 0);
    CHECK(*e.right == 1);
  }
  CHECK(interior == 1);
  auto lists = [&](Index c, Index other) {
    return std::count(m.cell(c).neighbors.begin(), m.cell(c).neighbors.end(),
                      std::optional<Index>(other)) == 1;
  };
  CHECK(lists(0, 1));
  CHECK(lists(1, 0));
}

TEST_CASE("unit square area") {
  CHECK(std::abs(unit_square().total_area() - 1.0) <= 1e-14);
}

TEST_CASE("box mesh counts and area") {
  const TriMesh one = generate_box_mesh({0, 1}, {0, 1}, 1, 1);
  REQUIRE(one.num_cells() == 2);
  for (const Cell& c : one.cells()) CHECK(c.area == doctest::Approx(0.5));

  const TriMesh big = generate_box_mesh({-12.8, 12.8}, {-1.6, 1.6}, 256, 32);
  CHECK(big.num_cells() == 16384);
  CHECK(std::abs(big.total_area() - 25.6 * 3.2) <= 1e-12 * 81.92);
}

TEST_CASE("box mesh mirror symmetry") {
  const TriMesh m = generate_box_mesh({0, 3}, {-2, 2}, 6, 8);
  // Every cell has a mirror image with the same area.
  for (const Cell& c : m.cells()) {
    const Vec2 mirror{c.barycenter.x, -c.barycenter.y};
    const auto j = m.locate(mirror);
    REQUIRE(j.has_value());
    const Cell& d = m.cell(*j);
    CHECK(std::abs(d.barycenter.x - mirror.x) <= 1e-12);
    CHECK(std::abs(d.barycenter.y - mirror.y) <= 1e-12);
    CHECK(d.area == c.area);
  }
}

TEST_CASE("cell size") {
  const TriMesh sq = unit_square();
  CHECK(cell_size(sq, 0) == doctest::Approx(std::sqrt(2.0) / 3.0).epsilon(1e-14));
  CHECK(sq.cell(1).size == doctest::Approx(std::sqrt(2.0) / 3.0).epsilon(1e-14));

  // 3-4-5 triangle: inradius (3 + 4 - 5) / 2 = 1.
  const TriMesh lone = TriMesh::from_triangles({{0, 0}, {4, 0}, {0, 3}}, {{0, 1, 2}});
  CHECK(cell_size(lone, 0) == doctest::Approx(2.0).epsilon(1e-14));

  const TriMesh box = generate_box_mesh({0, 4}, {0, 4}, 8, 8);
  const double ref = box.cell(0).size;
  for (Index i = 0; i < box.num_cells(); ++i) {
    const Cell& c = box.cell(i);
    if (std::all_of(c.neighbors.begin(), c.neighbors.end(), [](auto& n) { return n.has_value(); })) {
      CHECK(c.size == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("closed-cell normal identity and orientation") {
  const TriMesh m = generate_box_mesh({-1, 2}, {-1, 1}, 7, 5);
  for (Index i = 0; i < m.num_cells(); ++i) {
    Vec2 sum;
    for (int k = 0; k < 3; ++k) sum += m.outward_normal(i, k) * m.edge(m.cell(i).edges[k]).length;
    CHECK(norm(sum) <= 1e-12 * m.perimeter(i));
  }
  for (const Edge& e : m.edges()) {
    CHECK(std::abs(norm(e.normal) - 1.0) <= 1e-14);
    if (e.boundary()) continue;
    const Vec2 d = m.cell(*e.right).barycenter - m.cell(e.left).barycenter;
    CHECK(dot(e.normal, d) > 0.0);
    CHECK(e.left < *e.right);
  }
}

TEST_CASE("save and load round trip") {
  const TriMesh m = generate_box_mesh({0, 1.3}, {-0.7, 0.7}, 5, 4);
  std::stringstream ss;
  save_mesh(m, ss);
  const TriMesh back = load_mesh(ss);
  CHECK(back.num_cells() == m.num_cells());
  CHECK(back.num_edges() == m.num_edges());
  CHECK(std::abs(back.total_area() - m.total_area()) <= 1e-14 * m.total_area());
}

TEST_CASE("mesh errors") {
  SUBCASE("clockwise cell names its id") {
    try {
      load_mesh("4 2\n0 0 0\n1 1 0\n2 1 1\n3 0 1\n0 0 1 2\n1 0 3 2\n");
      FAIL("expected MeshError");
    } catch (const MeshError& e) {
      CHECK(std::string(e.what()).find('1') != std::string::npos);
    }
  }
  SUBCASE("duplicate vertex") {
    CHECK_THROWS_AS(load_mesh("4 1\n0 0 0\n1 1 0\n2 0 1\n3 1 0\n0 0 1 2\n"), MeshError);
  }
  SUBCASE("malformed") {
    CHECK_THROWS_AS(load_mesh("3 1\n0 0 0\n1 1 0\n"), MeshError);
    CHECK_THROWS_AS(load_mesh("3 1\n0 0 0\n1 1 0\n2 0 1\n0 0 1 7\n"), MeshError);
  }
  SUBCASE("degenerate box range") {
    CHECK_THROWS_AS(generate_box_mesh({1, 1}, {0, 1}, 2, 2), MeshError);
    CHECK_THROWS_AS(generate_box_mesh({0, 1}, {0, 1}, 0, 2), MeshError);
  }
}

TEST_CASE("locate prefers the lower cell id on a shared edge") {
  const TriMesh m = unit_square();
  CHECK(m.locate({0.5, 0.5}) == std::optional<Index>(0));
  CHECK(m.locate({0.2, 0.8}) == std::optional<Index>(1));
  CHECK_FALSE(m.locate({2.0, 0.5}).has_value());
}
