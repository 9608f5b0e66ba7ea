#include "robincap/mesh.hpp"

#include <cmath>

namespace robincap {

namespace {

double signed_area(Vec2 a, Vec2 b, Vec2 c) {
  return 0.5 * cross(b - a, c - a);
}

}  // namespace

double AnnularMesh::triangle_area(int t) const {
  const auto& tri = triangles[t];
  return signed_area(nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]);
}

double AnnularMesh::total_area() const {
  double acc = 0.0;
  for (size_t t = 0; t < triangles.size(); ++t)
    acc += triangle_area(static_cast<int>(t));
  return acc;
}

double AnnularMesh::outer_perimeter() const {
  double acc = 0.0;
  for (double len : outer_edge_lengths) acc += len;
  return acc;
}

double AnnularMesh::core_area() const {
  double acc = 0.0;
  const size_t m = inner_nodes.size();
  for (size_t i = 0; i < m; ++i) {
    const Vec2 a = nodes[inner_nodes[i]];
    const Vec2 b = nodes[inner_nodes[(i + 1) % m]];
    acc += cross(a, b);
  }
  return 0.5 * acc;
}

Vec2 AnnularMesh::core_centroid() const {
  double a6 = 0.0;
  Vec2 c{0.0, 0.0};
  const size_t m = inner_nodes.size();
  for (size_t i = 0; i < m; ++i) {
    const Vec2 p = nodes[inner_nodes[i]];
    const Vec2 q = nodes[inner_nodes[(i + 1) % m]];
    const double w = cross(p, q);
    a6 += w;
    c = c + w * (p + q);
  }
  if (a6 == 0.0) return {0.0, 0.0};
  return (1.0 / (3.0 * a6)) * c;
}

AnnularMesh build_annular_mesh(const ShapePair& pair, int n_theta,
                               int n_radial) {
  if (n_theta < 16) throw MeshError("build_annular_mesh: n_theta must be >= 16");
  if (n_radial < 2) throw MeshError("build_annular_mesh: n_radial must be >= 2");

  AnnularMesh mesh;
  mesh.n_theta = n_theta;
  mesh.n_radial = n_radial;

  // Boundary samples along rays from K.center.
  std::vector<Vec2> inner(n_theta), outer(n_theta);
  for (int i = 0; i < n_theta; ++i) {
    const double theta = 2.0 * M_PI * i / n_theta;
    const Vec2 dir{std::cos(theta), std::sin(theta)};
    const double rK = pair.K.radius(theta);
    const double rO = radius_about(pair.Omega, pair.K.center, theta);
    if (!(rO > rK + 1e-9 * std::max(1.0, rK)))
      throw MeshError("build_annular_mesh: K touches Omega along a ray (K = "
                      "Omega needs no mesh)");
    inner[i] = pair.K.center + rK * dir;
    outer[i] = pair.K.center + rO * dir;
  }

  auto idx = [n_theta](int i, int j) { return j * n_theta + (i % n_theta); };

  mesh.nodes.resize(static_cast<size_t>(n_theta) * (n_radial + 1));
  mesh.node_level.resize(mesh.nodes.size());
  for (int j = 0; j <= n_radial; ++j) {
    const double s = static_cast<double>(j) / n_radial;
    for (int i = 0; i < n_theta; ++i) {
      mesh.nodes[idx(i, j)] = (1.0 - s) * inner[i] + s * outer[i];
      mesh.node_level[idx(i, j)] = s;
    }
  }

  double bbox = 0.0;
  for (const Vec2& p : mesh.nodes) bbox = std::max({bbox, std::abs(p.x), std::abs(p.y)});
  const double degenerate = 1e-14 * bbox * bbox;

  auto push_triangle = [&](int a, int b, int c) {
    if (signed_area(mesh.nodes[a], mesh.nodes[b], mesh.nodes[c]) < 0.0)
      std::swap(b, c);
    if (signed_area(mesh.nodes[a], mesh.nodes[b], mesh.nodes[c]) <= degenerate)
      throw MeshError(
          "build_annular_mesh: degenerate triangle (resolution too coarse for "
          "the boundary oscillation)");
    mesh.triangles.push_back({a, b, c});
  };

  for (int j = 0; j < n_radial; ++j) {
    for (int i = 0; i < n_theta; ++i) {
      const int n00 = idx(i, j), n10 = idx(i + 1, j);
      const int n01 = idx(i, j + 1), n11 = idx(i + 1, j + 1);
      const double diag_a = norm(mesh.nodes[n00] - mesh.nodes[n11]);
      const double diag_b = norm(mesh.nodes[n10] - mesh.nodes[n01]);
      if (diag_a <= diag_b) {
        push_triangle(n00, n10, n11);
        push_triangle(n00, n11, n01);
      } else {
        push_triangle(n00, n10, n01);
        push_triangle(n10, n11, n01);
      }
    }
  }

  for (int i = 0; i < n_theta; ++i) mesh.inner_nodes.push_back(idx(i, 0));
  for (int i = 0; i < n_theta; ++i) {
    const int a = idx(i, n_radial), b = idx(i + 1, n_radial);
    mesh.outer_edges.emplace_back(a, b);
    mesh.outer_edge_lengths.push_back(norm(mesh.nodes[b] - mesh.nodes[a]));
  }
  return mesh;
}

}  // namespace robincap
