#pragma once

#include <cstddef>
#include <vector>

#include "fracspec/fem/lagrange.hpp"
#include "fracspec/fem/mesh.hpp"

namespace fracspec::fem {

/// Continuous order-p scalar numbering: vertices first, then p - 1 nodes per
/// edge, then the interior nodes of each triangle. Each of the fields v, t1,
/// t2 uses this numbering; only v is constrained on the boundary.
class DofMap {
 public:
  DofMap(const TriangleMesh& mesh, int p);

  int order() const { return p_; }
  std::size_t scalar_count() const { return count_; }
  std::size_t dofs_per_element() const { return per_element_; }
  /// Global scalar dofs of element e, in LagrangeBasis node order.
  const std::size_t* element_dofs(std::size_t e) const { return &element_dofs_[e * per_element_]; }
  bool on_boundary(std::size_t dof) const { return boundary_[dof]; }
  Point node(std::size_t dof) const { return nodes_[dof]; }

  /// Pencil layout: interior v dofs, then t1 and t2 over all scalar dofs.
  std::size_t pencil_size() const { return v_count_ + 2 * count_; }
  std::size_t dirichlet_count() const { return count_ - v_count_; }
  long v_index(std::size_t dof) const { return v_index_[dof]; }
  std::size_t t1_index(std::size_t dof) const { return v_count_ + dof; }
  std::size_t t2_index(std::size_t dof) const { return v_count_ + count_ + dof; }
  std::size_t v_count() const { return v_count_; }

 private:
  int p_;
  std::size_t count_ = 0;
  std::size_t per_element_ = 0;
  std::size_t v_count_ = 0;
  std::vector<std::size_t> element_dofs_;
  std::vector<bool> boundary_;
  std::vector<Point> nodes_;
  std::vector<long> v_index_;
};

}  // namespace fracspec::fem
