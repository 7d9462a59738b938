#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "fracspec/types.hpp"

namespace fracspec::fem {

enum class BaseShape { kTriangle, kHexagon };

/// Conforming mesh of equilateral triangles (counterclockwise vertex order).
struct TriangleMesh {
  std::vector<Point> vertices;
  std::vector<std::array<std::size_t, 3>> triangles;
  std::vector<bool> boundary_vertex;
  int refinement_level = 0;
  BaseShape shape = BaseShape::kTriangle;

  std::size_t num_triangles() const { return triangles.size(); }
  double element_area(std::size_t e) const;
  /// Side length of the (congruent) elements.
  double element_size() const;
  double total_area() const;
};

/// Edges as sorted vertex pairs, with the triangles on either side.
struct EdgeTable {
  std::vector<std::array<std::size_t, 2>> edges;
  std::vector<std::array<long, 2>> neighbours;         // second is -1 on the boundary
  std::vector<std::array<std::size_t, 3>> of_triangle;  // edge opposite local vertex k

  bool is_boundary(std::size_t edge) const { return neighbours[edge][1] < 0; }
};

EdgeTable build_edges(const TriangleMesh& mesh);

/// 4 triangles tiling T0 (circumradius 1, vertex at 90 degrees) or 6 tiling H0.
TriangleMesh initial_mesh(BaseShape shape);

/// Splits every triangle into four congruent children at the edge midpoints.
TriangleMesh refine(const TriangleMesh& mesh);

TriangleMesh uniform_mesh(BaseShape shape, int refinements);

/// Largest relative deviation of any element from equilateral with the
/// common area; zero up to rounding for meshes built here.
double congruence_defect(const TriangleMesh& mesh);

/// {vertices, triangles, boundary, refinement}.
std::string mesh_to_json(const TriangleMesh& mesh);

}  // namespace fracspec::fem
