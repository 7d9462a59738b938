#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fracspec/conformal/schwarz_christoffel.hpp"

namespace fracspec::conformal {

/// A disk point xi stored relative to an anchor: xi = xi_anchor + delta for a
/// prevertex anchor, xi = delta for anchor -1. Keeping delta separate keeps
/// points next to a prevertex at full relative accuracy.
struct DiskPoint {
  long anchor = -1;
  Complex anchor_point = 0.0;
  Complex delta = 0.0;
  Complex xi() const { return anchor_point + delta; }
};

struct InverseOptions {
  int seed_grid = 64;           // seeds per polar direction
  double tolerance = 1e-11;     // residual, relative to the diameter
  int max_iterations = 80;
  double corner_radius = 0.05;  // anchor at a vertex closer than this times the shortest side
};

/// Inverse of a solved disk map, g^{-1}: polygon -> disk. Newton's method
/// with step halving, seeded from a grid of forward images.
class InverseMap {
 public:
  explicit InverseMap(PrevertexSolution sol, InverseOptions options = {});

  /// Throws a numerical error carrying the best residual on non-convergence.
  DiskPoint operator()(Point z) const;
  const PrevertexSolution& solution() const { return sol_; }

 private:
  Complex residual(const DiskPoint& p, Point z) const;
  std::size_t nearest_seed(Point z) const;

  PrevertexSolution sol_;
  InverseOptions options_;
  std::vector<Complex> seed_xi_;
  std::vector<Point> seed_z_;
  // Bucket grid over the bounding box of the seed images.
  Point box_lo_;
  double cell_ = 1.0;
  int cells_x_ = 1, cells_y_ = 1;
  std::vector<std::vector<std::size_t>> buckets_;
  double corner_radius_ = 0.0;
  double tolerance_ = 0.0;
};

/// A boundary point of the base polygon where |f'| is singular: the image
/// under g0 of a prevertex of g_j that is not a fixed one.
struct SingularPoint {
  std::size_t prevertex = 0;  // index into the level map
  double exponent = 0.0;      // alpha_k - 1, the power of |f'| there
  Point z;
  std::size_t base_edge = 0;  // edge of the base polygon containing z
  double t = 0.0;             // position along that edge in [0, 1]
};

/// f = g_j o g0^{-1} from the base polygon onto the level polygon. Both maps
/// share the symmetry order and the fixed prevertices.
class CompositeMap {
 public:
  CompositeMap(PrevertexSolution g0, PrevertexSolution gj);

  const PrevertexSolution& base() const { return inverse_.solution(); }
  const PrevertexSolution& level() const { return gj_; }
  const InverseMap& inverse() const { return inverse_; }
  const geometry::Polygon& base_polygon() const { return base_polygon_; }
  bool is_identity() const { return identity_; }

  Point evaluate(Point z) const;
  /// |f'| at an interior point; no location check.
  double derivative_abs(Point z) const;
  double derivative_abs(const DiskPoint& p) const;
  /// |f'(s.z + dz)| for the singular point with index `i`, accurate for tiny dz.
  double derivative_abs_near(std::size_t i, Complex dz) const;
  const std::vector<SingularPoint>& singular_points() const { return singular_; }

 private:
  double log_abs(Complex xi, long near_rep, Complex near_v) const;

  InverseMap inverse_;
  PrevertexSolution gj_;
  geometry::Polygon base_polygon_;
  std::vector<Complex> level_powered_;  // xi_r^m for the level sector representatives
  double log_scale_ = 0.0;              // log |C_j / C_0|
  double fixed_exponent_ = 0.0;         // difference of the exponents at the fixed prevertices
  bool identity_ = false;
  std::vector<SingularPoint> singular_;
};

/// g^{-1}(z); checks that z lies in the closed polygon.
DiskPoint inverse_disk_map(const InverseMap& inverse, Point z);

/// |f'(z)|; checks that z lies in the open base polygon.
double composite_derivative_abs(const CompositeMap& map, Point z);

struct SingularityExponent {
  std::size_t vertex_index = 0;
  double alpha = 1.0;
  double beta = 1.0;
  double map_exponent() const { return alpha - beta + 1.0; }
  double inverse_derivative_exponent() const { return beta - alpha; }
  bool integrable() const { return alpha - beta < 1.0; }
};

/// Pairs of (base vertex, target vertex); unmatched target vertices get beta = 1.
using VertexMatching = std::vector<std::pair<std::size_t, std::size_t>>;

struct SingularityReport {
  std::vector<SingularityExponent> exponents;
  bool assumption_b = true;  // all alpha - beta < 1
};

SingularityReport singularity_exponents(const geometry::Polygon& base, const geometry::Polygon& target,
                                        const VertexMatching& matching);

enum class KochFamily { kT, kH };

struct EigenfunctionSingularity {
  std::string vertices;  // which vertices the row describes
  double alpha = 1.0;    // interior angle over pi in the level polygon
  double leading_power;  // of the transplanted eigenfunction in the distance to the point
};

/// Leading powers of transplanted first eigenfunctions at the fixed corners
/// and at the images of the two kinds of free vertices.
std::vector<EigenfunctionSingularity> transplanted_singularity_table(KochFamily family);

}  // namespace fracspec::conformal
