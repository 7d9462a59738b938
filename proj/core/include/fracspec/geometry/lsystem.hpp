#pragma once

#include <string>

#include "fracspec/geometry/polygon.hpp"

namespace fracspec::geometry {

enum class FamilyKind { kKoch, kKochGeneral, kQuadric, kGosper, kCesaro };

/// A prefractal family: a base polygon whose every edge is replaced, level by
/// level, by a scaled copy of the generator path.
///
/// The generator is an L-system rule over {F, +, -}: F draws a unit step, '+'
/// turns clockwise by turn_angle and '-' counterclockwise. With the base
/// traversed counterclockwise, a rule that starts with '+' therefore bulges
/// outward first.
struct FractalFamily {
  std::string name;
  FamilyKind kind = FamilyKind::kKoch;
  Polygon base;
  std::string rule;
  double turn_angle = 0.0;
  /// Upper bound beta_0 on max(beta, 2 pi - beta) over all vertices of all levels.
  double max_angle_bound = 0.0;
  /// Number of vertices of the base that bound the self-similar components.
  int symmetry_order = 0;

  /// Ratio l_{j+1} / l_j of consecutive side lengths.
  double scale() const;
  /// Number of F steps in the rule.
  int segments_per_edge() const;
};

/// Koch snowflake: T_0 triangle, rule F+F--F+F at pi/3.
FractalFamily koch_family();
/// Koch curves of turn angle alpha in (0, pi/2) on a regular N-gon.
FractalFamily koch_general_family(double alpha, int sides = 3);
/// Cesaro antisnowflake, rule F-F++F-F. Only the boundary is supported.
FractalFamily cesaro_family(double alpha, int sides = 3);
/// Quadric island: unit square centred at the origin, rule F+F-F-FF+F+F-F at pi/2.
FractalFamily quadric_family();
/// Gosper-Peano island: hexagon of side 1, rule F+F-F at pi/2 (l_j = 5^{-j/2}).
FractalFamily gosper_family();

/// Parses "koch", "koch-general(<alpha>)", "cesaro(<alpha>)", "quadric", "gosper".
FractalFamily family_by_name(const std::string& name);

/// The level-j prefractal. Throws a config error when the vertex count would
/// exceed kMaxLsystemVertices and a hypothesis error when the boundary is not
/// a Jordan curve.
Polygon lsystem_boundary(const FractalFamily& family, int j);

inline constexpr std::size_t kMaxLsystemVertices = 1u << 22;

}  // namespace fracspec::geometry
