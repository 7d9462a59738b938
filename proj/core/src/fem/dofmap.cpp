#include "fracspec/fem/dofmap.hpp"

namespace fracspec::fem {

DofMap::DofMap(const TriangleMesh& mesh, int p) : p_(p) {
  const LagrangeBasis basis(p);
  const EdgeTable edges = build_edges(mesh);
  const std::size_t nv = mesh.vertices.size(), ne = edges.edges.size();
  const std::size_t interior_per_cell = static_cast<std::size_t>((p - 1) * (p - 2) / 2);
  count_ = nv + ne * static_cast<std::size_t>(p - 1) + mesh.triangles.size() * interior_per_cell;
  per_element_ = static_cast<std::size_t>(basis.size());
  element_dofs_.resize(mesh.triangles.size() * per_element_);
  boundary_.assign(count_, false);
  nodes_.resize(count_);

  for (std::size_t e = 0; e < mesh.triangles.size(); ++e) {
    const auto& t = mesh.triangles[e];
    std::size_t next_interior = 0;
    for (int k = 0; k < basis.size(); ++k) {
      const int i = basis.lattice(k)[0], j = basis.lattice(k)[1];
      const int bary[3] = {p - i - j, i, j};
      const Point x = (static_cast<double>(bary[0]) * mesh.vertices[t[0]] +
                       static_cast<double>(bary[1]) * mesh.vertices[t[1]] +
                       static_cast<double>(bary[2]) * mesh.vertices[t[2]]) /
                      static_cast<double>(p);
      std::size_t dof;
      int zeros = 0, missing = -1;
      for (int c = 0; c < 3; ++c)
        if (bary[c] == 0) {
          ++zeros;
          missing = c;
        }
      if (zeros == 2) {
        const int c = bary[0] == p ? 0 : (bary[1] == p ? 1 : 2);
        dof = t[c];
        boundary_[dof] = mesh.boundary_vertex[t[c]];
      } else if (zeros == 1) {
        const std::size_t edge = edges.of_triangle[e][missing];
        const std::size_t lo = edges.edges[edge][0];
        // Position along the edge counted from its lower-numbered vertex.
        const int a = (missing + 1) % 3, b = (missing + 2) % 3;
        const int from_lo = t[a] == lo ? bary[b] : bary[a];
        dof = nv + edge * static_cast<std::size_t>(p - 1) + static_cast<std::size_t>(from_lo - 1);
        boundary_[dof] = edges.is_boundary(edge);
      } else {
        dof = nv + ne * static_cast<std::size_t>(p - 1) + e * interior_per_cell + next_interior++;
      }
      element_dofs_[e * per_element_ + static_cast<std::size_t>(k)] = dof;
      nodes_[dof] = x;
    }
  }
  v_index_.assign(count_, -1);
  for (std::size_t d = 0; d < count_; ++d)
    if (!boundary_[d]) v_index_[d] = static_cast<long>(v_count_++);
}

}  // namespace fracspec::fem
