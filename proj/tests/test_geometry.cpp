#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "maas/geometry.hpp"

using namespace maas;

namespace {

double tri_area2(const SubdomainMesh& m, int t) {
  auto [a, b, c] = m.triangles[t];
  auto pa = m.nodes[a], pb = m.nodes[b], pc = m.nodes[c];
  return (pb[0] - pa[0]) * (pc[1] - pa[1]) - (pb[1] - pa[1]) * (pc[0] - pa[0]);
}

// Independent boundary-layer oracle: scan every vertex of every triangle.
std::set<int> layer_by_scan(const SubdomainMesh& m) {
  std::set<int> out;
  double tol = 1e-12;
  for (int t = 0; t < m.n_triangles(); ++t)
    for (int v : m.triangles[t]) {
      auto [x, y] = m.nodes[v];
      if (std::abs(x - m.box.x0) < tol || std::abs(x - m.box.x1) < tol ||
          std::abs(y - m.box.y0) < tol || std::abs(y - m.box.y1) < tol)
        out.insert(t);
    }
  return out;
}

} // namespace

TEST_CASE("partition counts and layout") {
  auto p = build_partition(3, 3);
  CHECK(p.n_subdomains() == 9);
  CHECK(p.interfaces.size() == 12);
  CHECK(p.cross_points.size() == 4);
  CHECK(p.h_coarse == doctest::Approx(1.0 / 3).epsilon(1e-15));

  // middle subdomain is surrounded by interfaces, corner one is not
  int mid = p.subdomain_id(1, 1);
  for (int e = 0; e < 4; ++e) CHECK(p.interface_on(mid, Edge(e)).has_value());
  int sw = p.subdomain_id(0, 0);
  CHECK_FALSE(p.interface_on(sw, kSouth).has_value());
  CHECK_FALSE(p.interface_on(sw, kWest).has_value());
  CHECK(p.interface_on(sw, kEast).has_value());
  CHECK(p.interface_on(sw, kNorth).has_value());

  // every interface is a full edge of both neighbours
  for (const auto& f : p.interfaces) {
    CHECK(f.length() == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(f.left >= 0);
    CHECK(f.right >= 0);
    CHECK(f.left != f.right);
    Edge el = edge_of_interface(p, f.left, f.id);
    Edge er = edge_of_interface(p, f.right, f.id);
    if (f.axis == 0) {
      CHECK(el == kEast);
      CHECK(er == kWest);
    } else {
      CHECK(el == kNorth);
      CHECK(er == kSouth);
    }
  }

  auto cp = p.cross_points[0];
  CHECK(cp.x == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(cp.y == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(cp.subdomains == std::array<int, 4>{0, 1, 3, 4});
}

TEST_CASE("partition edge cases") {
  auto p21 = build_partition(2, 1);
  CHECK(p21.interfaces.size() == 1);
  CHECK(p21.cross_points.empty());
  auto p11 = build_partition(1, 1);
  CHECK(p11.interfaces.empty());
  CHECK_THROWS_AS(build_partition(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(build_partition(3, -1), std::invalid_argument);
}

TEST_CASE("subdomain mesh counts") {
  Rect box{0, 0, 0.5, 0.5};
  auto m = build_subdomain_mesh(0, box, 6);
  CHECK(m.n_nodes() == 49);
  CHECK(m.n_triangles() == 72);
  CHECK(m.interior_nodes.size() == 25);
  for (int e = 0; e < 4; ++e) CHECK(m.edge_nodes[e].size() == 7);
  CHECK_THROWS_AS(build_subdomain_mesh(0, box, 1), std::invalid_argument);
}

TEST_CASE("triangles are counterclockwise and tile the box") {
  auto m = build_subdomain_mesh(3, Rect{0.25, 0.5, 0.75, 1.0}, 5);
  double area = 0;
  for (int t = 0; t < m.n_triangles(); ++t) {
    double a2 = tri_area2(m, t);
    CHECK(a2 > 0);
    area += 0.5 * a2;
  }
  CHECK(area == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("node classes partition the node set") {
  auto m = build_subdomain_mesh(0, Rect{0, 0, 1. / 3, 1. / 3}, 4);
  std::set<int> seen(m.interior_nodes.begin(), m.interior_nodes.end());
  CHECK(seen.size() == m.interior_nodes.size());
  for (int e = 0; e < 4; ++e)
    for (int v : m.edge_nodes[e]) seen.insert(v);
  CHECK(static_cast<int>(seen.size()) == m.n_nodes());
  // corners appear in exactly two edge lists and as corner_nodes
  for (int c : m.corner_nodes) {
    int hits = 0;
    for (int e = 0; e < 4; ++e)
      hits += std::count(m.edge_nodes[e].begin(), m.edge_nodes[e].end(), c);
    CHECK(hits == 2);
  }
  // interior nodes are in no edge list
  for (int v : m.interior_nodes) {
    for (int e = 0; e < 4; ++e)
      CHECK(std::count(m.edge_nodes[e].begin(), m.edge_nodes[e].end(), v) == 0);
  }
}

TEST_CASE("boundary layer matches a brute-force vertex scan") {
  for (int n : {2, 3, 6, 9}) {
    auto m = build_subdomain_mesh(0, Rect{1. / 3, 0, 2. / 3, 1. / 3}, n);
    auto oracle = layer_by_scan(m);
    std::set<int> impl(m.boundary_layer.begin(), m.boundary_layer.end());
    CHECK(impl == oracle);
    int expected = 2 * n * n - 2 * (n - 2) * (n - 2);
    CHECK(static_cast<int>(impl.size()) == expected);
    for (int t = 0; t < m.n_triangles(); ++t)
      CHECK(static_cast<bool>(m.in_boundary_layer[t]) == (oracle.count(t) > 0));
  }
}

TEST_CASE("mesh nodes hit the box corners exactly") {
  auto p = build_partition(3, 3);
  auto m = build_subdomain_mesh(4, p.boxes[4], 7);
  CHECK(m.nodes[m.corner_nodes[0]][0] == p.boxes[4].x0);
  CHECK(m.nodes[m.corner_nodes[0]][1] == p.boxes[4].y0);
  CHECK(m.nodes[m.corner_nodes[2]][0] == p.boxes[4].x1);
  CHECK(m.nodes[m.corner_nodes[2]][1] == p.boxes[4].y1);
}

TEST_CASE("side assignment rules") {
  auto p = build_partition(2, 1);
  std::vector<SubdomainMesh> meshes;
  meshes.push_back(build_subdomain_mesh(0, p.boxes[0], 4));
  meshes.push_back(build_subdomain_mesh(1, p.boxes[1], 6));

  auto coarse = assign_sides(p, meshes, MortarRule::CoarserSide);
  CHECK(coarse.mortar[0] == 0);
  CHECK(coarse.nonmortar[0] == 1);
  auto fine = assign_sides(p, meshes, MortarRule::FinerSide);
  CHECK(fine.mortar[0] == 1);
  CHECK(fine.nonmortar[0] == 0);

  meshes[1] = build_subdomain_mesh(1, p.boxes[1], 4); // tie
  auto tie = assign_sides(p, meshes, MortarRule::CoarserSide);
  CHECK(tie.mortar[0] == 0);

  std::vector<int> pick{1};
  auto expl = assign_sides(p, meshes, MortarRule::Explicit, &pick);
  CHECK(expl.mortar[0] == 1);
  std::vector<int> bad{5};
  CHECK_THROWS_AS(assign_sides(p, meshes, MortarRule::Explicit, &bad),
                  std::invalid_argument);
  CHECK_THROWS_AS(assign_sides(p, meshes, MortarRule::Explicit, nullptr),
                  std::invalid_argument);
  std::vector<int> short_list;
  CHECK_THROWS_AS(assign_sides(p, meshes, MortarRule::Explicit, &short_list),
                  std::invalid_argument);
}
