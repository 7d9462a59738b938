#pragma once

#include <Eigen/SparseCore>
#include <cstddef>
#include <string>

#include "fracspec/fem/dofmap.hpp"
#include "fracspec/fem/mesh.hpp"
#include "fracspec/fem/triangle_quadrature.hpp"
#include "fracspec/fem/weight.hpp"

namespace fracspec::fem {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Q(z) = K - 2 z L + z^2 M in the unknowns (v, t1, t2):
///   K = int |f'|^-2 div t div t~ + grad v . grad v~
///   L = int grad v . t~ + t . grad v~
///   M = int |f'|^2 v v~ + t . t~
/// with v = 0 on the boundary. The leading `v_count` unknowns are v.
struct QuadraticPencil {
  SparseMatrix K, L, M;
  int level = 0;
  int order = 0;
  int refinement = 0;
  int quadrature_degree = 0;
  std::size_t v_count = 0;
  std::size_t scalar_dofs = 0;
  std::size_t dirichlet_dofs = 0;
  std::size_t weight_samples = 0;

  std::size_t size() const { return static_cast<std::size_t>(K.rows()); }
};

struct AssemblyOptions {
  int jobs = 1;
  ElementQuadratureOptions quadrature;
};

/// Assembles the pencil element by element. Elements are processed in
/// chunks on `jobs` threads and summed in element order, so the result does
/// not depend on the thread count. Throws a numerical error when the weight
/// is not finite and positive at a quadrature point.
QuadraticPencil assemble_pencil(const TriangleMesh& mesh, const DofMap& dofs, const Weight& weight,
                                const AssemblyOptions& options = {});

/// Matrix Market coordinate format, general real, 17 significant digits.
void write_matrix_market(const SparseMatrix& a, const std::string& path);
SparseMatrix read_matrix_market(const std::string& path);

}  // namespace fracspec::fem
