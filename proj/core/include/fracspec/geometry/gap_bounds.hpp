#pragma once

namespace fracspec::geometry {

/// Upper bound on the eigenvalue gap between the inner and outer polygons.
struct GapBound {
  double constant_C = 0.0;
  double bound = 0.0;
  int level = 0;
};

/// Pang-type constant 2^9 lambda^4 S^{9/4} / (3 pi^{9/4} R^7), where lambda is
/// the first Dirichlet eigenvalue of the unit disk, S the area of the outer
/// base polygon and R the inradius of the inner one.
double pang_constant(double area_outer, double inradius_inner);

/// Koch snowflake bound lambda^4 3^{3/4} / (2^{5/4} pi^{9/4}) * 3^{-j/2}.
/// constant_C carries pang_constant(3 sqrt(3) / 2, 1).
GapBound koch_gap_bound(int j);

/// C sqrt(2 delta) / sqrt(sin(beta0 / 2)) * sqrt(l_j) for the offset interpolants.
GapBound general_gap_bound(double C, double delta, double beta0, double ell_j, int level = 0);

}  // namespace fracspec::geometry
