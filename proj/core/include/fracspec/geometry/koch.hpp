#pragma once

#include <vector>

#include "fracspec/geometry/polygon.hpp"

namespace fracspec::geometry {

/// Inner and outer polygons bracketing a prefractal at one level.
struct InterpolationPair {
  Polygon inner;
  Polygon outer;
  int level = 0;
  double delta = 0.0;  // offset parameter; 0 for the Koch construction
};

/// Largest level accepted by the Koch generators (3*4^12 vertices already
/// needs about 800 MB once the outer polygon is included).
inline constexpr int kMaxKochLevel = 12;

/// Inner Koch polygon T_j. T_0 is the equilateral triangle inscribed in the
/// unit circle with a vertex at angle pi/2; each level bumps the middle third
/// of every edge outward. Vertex 0 stays at (0, 1).
Polygon koch_inner(int j);

/// Outer Koch polygon H_j. H_0 is the regular hexagon of side 1 with a vertex
/// at (0, 1); each level notches the middle third of every edge inward.
Polygon koch_outer(int j);

InterpolationPair koch_pair(int j);

/// Vertex indices of T_j (resp. H_j) that stay at the corners of T_0 (resp.
/// H_0) across all levels: the multiples of 4^j.
std::vector<std::size_t> koch_fixed_indices(const Polygon& polygon);

/// Edge length of T_j, sqrt(3) / 3^j.
double koch_inner_side(int j);

struct KochNestingReport {
  int level = 0;
  bool inner_nested = false;       // T_j inside T_{j+1}
  bool outer_nested = false;       // H_{j+1} inside H_j
  bool pair_nested = false;        // T_j inside H_j
  bool next_pair_nested = false;   // T_{j+1} inside H_{j+1}
  double collar_width = 0.0;       // width used for the collar check
  bool collar_holds = false;       // H_j points this deep inside lie in T_j
  double nominal_collar_width = 0.0;
  bool nominal_collar_holds = false;
  std::size_t collar_samples = 0;

  bool inclusions_hold() const { return inner_nested && outer_nested && pair_nested && next_pair_nested; }
};

/// Checks the chain T_j, T_{j+1}, H_{j+1}, H_j and the collar property: every
/// point of H_j at distance at least w from its boundary lies in the closure
/// of T_j. The collar is tested at the sharp width w = l_j / 4 (the distance
/// from an edge midpoint of T_j to the boundary of H_j) and at the nominal
/// width 1/3^{j+1}, on a grid of spacing w / 4 plus all vertices of both
/// polygons. Throws a hypothesis error when either polygon self-intersects.
KochNestingReport verify_koch_nesting(const InterpolationPair& pair_j, const InterpolationPair& pair_j1);

}  // namespace fracspec::geometry
