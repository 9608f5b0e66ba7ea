#pragma once

#include <array>
#include <stdexcept>
#include <utility>
#include <vector>

#include "robincap/shape.hpp"

namespace robincap {

class MeshError : public std::runtime_error {
 public:
  explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

/// Structured triangulation of the annular region Omega \ K, built by
/// transfinite interpolation between the two boundary curves along rays
/// from K.center. Node (i, j) sits at angle theta_i and radial level
/// s_j = j / n_radial; index = j * n_theta + i.
struct AnnularMesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> triangles;  // positively oriented
  std::vector<int> inner_nodes;               // ring on dK, Dirichlet u = 1
  std::vector<std::pair<int, int>> outer_edges;  // ring on dOmega, in order
  std::vector<double> outer_edge_lengths;
  std::vector<double> node_level;  // transfinite coordinate s per node
  int n_theta = 0;
  int n_radial = 0;

  double triangle_area(int t) const;
  double total_area() const;           // sum of triangle areas
  double outer_perimeter() const;      // sum of outer edge lengths
  double core_area() const;            // shoelace area of the inner ring
  Vec2 core_centroid() const;
};

/// Builds the mesh; n_theta >= 16, n_radial >= 2, K strictly inside Omega.
/// Each quad is split into two triangles along its shorter diagonal.
/// Throws MeshError on degenerate triangles.
AnnularMesh build_annular_mesh(const ShapePair& pair, int n_theta,
                               int n_radial);

}  // namespace robincap
