#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "robincap/mesh.hpp"

using namespace robincap;

namespace {

ShapePair concentric(double r_in, double r_out) {
  return validate_pair(make_circle({0, 0}, r_in), make_circle({0, 0}, r_out));
}

int undirected_edge_count(const AnnularMesh& mesh) {
  std::set<std::pair<int, int>> edges;
  for (const auto& t : mesh.triangles)
    for (int e = 0; e < 3; ++e) {
      int a = t[e], b = t[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      edges.insert({a, b});
    }
  return static_cast<int>(edges.size());
}

}  // namespace

TEST_CASE("node and triangle counts") {
  const AnnularMesh mesh = build_annular_mesh(concentric(1.0, 2.0), 64, 8);
  CHECK(mesh.nodes.size() == 64u * 9u);
  CHECK(mesh.triangles.size() == 64u * 8u * 2u);
  CHECK(mesh.inner_nodes.size() == 64u);
  CHECK(mesh.outer_edges.size() == 64u);
}

TEST_CASE("all triangles positively oriented and non-degenerate") {
  const AnnularMesh mesh =
      build_annular_mesh(sample_random_pair(5, 4.0 * M_PI, 0.15), 64, 8);
  for (size_t t = 0; t < mesh.triangles.size(); ++t)
    CHECK(mesh.triangle_area(static_cast<int>(t)) > 0.0);
}

TEST_CASE("Euler characteristic of the annulus") {
  for (auto [nt, nr] : {std::pair{16, 2}, {64, 8}, {48, 5}}) {
    const AnnularMesh mesh = build_annular_mesh(concentric(1.0, 2.0), nt, nr);
    const int V = static_cast<int>(mesh.nodes.size());
    const int E = undirected_edge_count(mesh);
    const int F = static_cast<int>(mesh.triangles.size());
    CHECK(V - E + F == 0);
  }
}

TEST_CASE("boundary rings sit on the analytic curves") {
  const ShapePair pair = sample_random_pair(11, 4.0 * M_PI, 0.1);
  const AnnularMesh mesh = build_annular_mesh(pair, 64, 8);
  for (int i = 0; i < mesh.n_theta; ++i) {
    const Vec2 p = mesh.nodes[mesh.inner_nodes[i]];
    const Vec2 d = p - pair.K.center;
    const double theta = std::atan2(d.y, d.x);
    CHECK(norm(d) == doctest::Approx(pair.K.radius(theta)).epsilon(1e-12));
    CHECK(mesh.node_level[mesh.inner_nodes[i]] == 0.0);
  }
  for (const auto& [a, b] : mesh.outer_edges) {
    CHECK(mesh.node_level[a] == 1.0);
    CHECK(mesh.node_level[b] == 1.0);
    const Vec2 d = mesh.nodes[a] - pair.Omega.center;
    const double theta = std::atan2(d.y, d.x);
    CHECK(std::abs(norm(d) - pair.Omega.radius(theta)) < 1e-8);
  }
}

TEST_CASE("mesh area approaches the annular area") {
  const ShapePair pair = concentric(1.0, 2.0);
  const AnnularMesh mesh = build_annular_mesh(pair, 256, 16);
  const double expected = area(pair.Omega) - area(pair.K);
  CHECK(mesh.total_area() == doctest::Approx(expected).epsilon(1e-3));
  CHECK(mesh.core_area() == doctest::Approx(area(pair.K)).epsilon(1e-3));
}

TEST_CASE("outer edge lengths approach the perimeter") {
  const ShapePair pair = concentric(1.0, 2.0);
  const AnnularMesh mesh = build_annular_mesh(pair, 256, 4);
  CHECK(mesh.outer_perimeter() ==
        doctest::Approx(perimeter(pair.Omega)).epsilon(1e-3));
}

TEST_CASE("core centroid of a concentric mesh is the center") {
  const AnnularMesh mesh = build_annular_mesh(concentric(1.0, 2.0), 64, 4);
  CHECK(std::abs(mesh.core_centroid().x) < 1e-12);
  CHECK(std::abs(mesh.core_centroid().y) < 1e-12);
}

TEST_CASE("K = Omega and bad resolutions are rejected") {
  const StarShape unit = make_circle({0, 0}, 1.0);
  const ShapePair same{unit, unit};
  CHECK_THROWS_AS(build_annular_mesh(same, 64, 8), MeshError);
  CHECK_THROWS_AS(build_annular_mesh(concentric(1.0, 2.0), 8, 8), MeshError);
  CHECK_THROWS_AS(build_annular_mesh(concentric(1.0, 2.0), 64, 1), MeshError);
}
