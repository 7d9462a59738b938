#pragma once

#include <cstddef>
#include <vector>

#include "fracspec/fem/mesh.hpp"
#include "fracspec/fem/weight.hpp"
#include "fracspec/types.hpp"

namespace fracspec::fem {

/// Rule on the reference triangle (0,0), (1,0), (0,1); weights sum to 1/2.
struct TriangleRule {
  std::vector<double> x, y, w;
  int degree = 0;
};

/// Collapsed (Duffy) Gauss rule: Gauss-Legendre across, Gauss-Jacobi(1, 0)
/// along the collapsed direction. Exact for polynomials of total degree `degree`.
const TriangleRule& collapsed_gauss(int degree);

enum class WeightKind { kInterior, kBoundary };

/// Degree of the standard rule for order p: 2p + 4 inside, 2p + 10 on
/// elements touching the boundary. Throws a config error for p outside [1, 8].
int quadrature_degree(int p, WeightKind kind);

/// A physical quadrature point. When `singular` >= 0 the weight is evaluated
/// as near(singular, offset), which keeps tiny offsets exact.
struct QuadPoint {
  Point z;
  double w = 0.0;
  long singular = -1;
  Complex offset = 0.0;
};

struct ElementQuadratureOptions {
  double grading_ratio = 0.25;  // successive radial layers shrink by this factor
  int grading_layers = 16;
  int radial_points = 12;
};

/// Quadrature points for one element. Interior elements get the plain rule.
/// Elements touching the boundary are split at the centroid and at singular
/// points on their boundary edges; pieces with a singular vertex, or a
/// boundary vertex within h/2 of one, get radially graded layers there.
class ElementQuadrature {
 public:
  ElementQuadrature(const TriangleMesh& mesh, int p, const Weight& weight, ElementQuadratureOptions options = {});

  std::vector<QuadPoint> points(std::size_t e) const;
  bool touches_boundary(std::size_t e) const;

 private:
  void add_rule(std::vector<QuadPoint>& out, Point a, Point b, Point c, int degree) const;
  void add_graded(std::vector<QuadPoint>& out, Point apex, Point b, Point c, long singular, Point apex_offset) const;
  void add_piece(std::vector<QuadPoint>& out, Point c, Point x, long sx, Point y, long sy) const;
  long nearest_singular(Point z, double radius) const;

  const TriangleMesh& mesh_;
  int p_;
  const Weight& weight_;
  ElementQuadratureOptions options_;
  EdgeTable edges_;
  double h_;
  std::vector<bool> near_singular_;  // elements within 1.5 h of a singular point
};

}  // namespace fracspec::fem
