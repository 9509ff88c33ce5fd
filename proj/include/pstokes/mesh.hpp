#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "pstokes/geom.hpp"

namespace pstokes {

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Conforming triangulation of a simply connected planar domain.
///
/// Local conventions: triangle vertices are counterclockwise; local edge i is
/// opposite local vertex i, traversed from local vertex i+1 to i+2 (mod 3).
/// Every edge carries one global unit normal: the outward normal of the
/// lower-indexed adjacent triangle (outward of the domain on the boundary).
/// Immutable after construction.
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::array<int, 2>> edges;  // endpoint vertex ids, lower first
  std::vector<std::array<int, 3>> triangle_to_edges;
  std::vector<std::array<int, 3>> triangle_edge_sign;  // +1 if global normal is outward
  std::vector<std::array<int, 2>> edge_triangles;      // second is -1 on boundary
  std::vector<Vec2> edge_normals;                      // global unit normals
  std::vector<char> edge_on_boundary;
  std::vector<char> vertex_on_boundary;
  double h_max = 0.0;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int n_boundary_edges() const;
  int n_boundary_vertices() const;

  double triangle_area(int t) const;
  double edge_length(int e) const;
  double total_area() const;
  double boundary_length() const;

  /// Throws MeshError on conformity, orientation or Euler-relation violations.
  void check_invariants() const;
};

/// Deduplicates edges, fixes orientation, assigns global normals and detects
/// the boundary. Throws MeshError on non-manifold edges (more than two
/// adjacent triangles, or two triangles on the same side) and on degenerate
/// triangles (area <= 1e-14 * h^2 with h the longest edge).
Mesh build_topology(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles);

/// Level-0 criss-cross mesh of the L-shaped domain (-1,1)^2 \ ((0,1)x(-1,0)):
/// three unit squares, each split into four triangles by its centroid.
/// 11 vertices, 22 edges, 12 triangles.
Mesh make_lshape_mesh();

/// Uniform red refinement: each triangle splits into four congruent children
/// via the edge midpoints. h_max halves.
Mesh red_refine(const Mesh& mesh);

/// ASCII format: first non-comment line "nv nt", then nv lines "x y", then
/// nt lines "i j k" (0-based vertex indices). '#' starts a comment.
Mesh load_mesh(const std::string& path);

}  // namespace pstokes
