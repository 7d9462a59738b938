#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fracspec/geometry/koch.hpp"
#include "fracspec/geometry/lsystem.hpp"

namespace fracspec::geometry {

struct CornerOffset {
  Point inner;  // on the bisector of the interior angle
  Point outer;  // on the bisector of the exterior angle
};

/// Offset points of vertex k at parameter eps: A -/+ eps / sin(beta / 2) along
/// the interior bisector. Throws a precondition error unless 0 < eps < epsilon0(s).
CornerOffset corner_offset_points(const Polygon& s, std::size_t k, double eps);

/// Largest eps for which every inner offset point lies inside s and every
/// outer one outside. Computed by casting each bisector ray to the first
/// boundary hit, so it is sharp rather than a lower estimate.
double epsilon0(const Polygon& s);

/// Quadrilateral attached to edge k = [A, B], vertices in counterclockwise
/// order A^o, B^o, B^i, A^i.
struct Quadrilateral {
  std::array<Point, 4> v;
  bool is_convex(double tol) const;
};

/// One quadrilateral per edge. Throws a precondition error unless 0 < eps < epsilon0(s).
std::vector<Quadrilateral> quadrilateral_cover(const Polygon& s, double eps);

/// First pair of quadrilaterals whose interiors overlap by more than tol, or
/// a pair (k, k) for a quadrilateral that is not convex.
std::optional<std::pair<std::size_t, std::size_t>> find_overlapping_quadrilaterals(
    const std::vector<Quadrilateral>& quads, double tol);

/// T_j and H_j of an equal-sided polygon at offset delta * l_j. Throws a
/// hypothesis error naming (G1) when cover tiles overlap and (G2) when either
/// polygon fails to be a Jordan curve; a precondition error when
/// delta * l_j >= epsilon0.
InterpolationPair inner_outer_interpolants(const Polygon& sigma, double delta);

/// Outer polygon of the Koch-type construction for general angle: every edge
/// of the inner polygon gets an outward isosceles triangle of height
/// tan(alpha / 2) / 2 times its length.
Polygon koch_general_outer(const Polygon& inner, double alpha);

/// Dispatches on the family: the Koch pair for koch, the isosceles outer
/// polygon for koch-general, the offset interpolants for quadric and Gosper.
/// Cesaro is rejected as unsupported.
InterpolationPair family_pair(const FractalFamily& family, int j, double delta);

struct HypothesisGLevel {
  int level = 0;
  bool g1 = false;
  bool g2 = false;
  /// Nesting against the next listed level; empty for the last one.
  std::optional<bool> g3;
  bool g4 = false;
  std::string note;
};

struct HypothesisGReport {
  std::string family;
  double delta = 0.0;
  std::vector<HypothesisGLevel> levels;

  bool all_pass() const;
  bool g1() const;
  bool g2() const;
  bool g3() const;
  bool g4() const;
};

/// Runs the four checks on each listed level. (G3) compares consecutive
/// entries: T_j inside T_k and H_k inside H_j for k the next listed level.
/// (G4) checks that the origin lies inside every inner polygon. Failures are
/// recorded, never thrown.
HypothesisGReport verify_hypothesis_g(const FractalFamily& family, double delta, const std::vector<int>& levels);

}  // namespace fracspec::geometry
