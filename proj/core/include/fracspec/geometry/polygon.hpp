#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "fracspec/types.hpp"

namespace fracspec::geometry {

/// A closed polygon with counterclockwise vertex order.
///
/// Interior angles are stored as fractions of pi (alpha_k = angle / pi). They
/// are computed from the coordinates and snapped to nearby rationals with small
/// denominators, so the prefractal families carry exact values such as 1/3 or
/// 5/3. Instances are immutable once built.
class Polygon {
 public:
  Polygon() = default;

  /// Builds a polygon from its vertex cycle. Clockwise input is reversed,
  /// keeping vertex 0 in place. Throws on fewer than three vertices or
  /// repeated consecutive vertices.
  explicit Polygon(std::vector<Point> vertices, int level = 0);

  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  const std::vector<double>& angle_fractions() const noexcept { return angle_fractions_; }
  int level() const noexcept { return level_; }
  std::size_t size() const noexcept { return vertices_.size(); }

  /// Present when every edge has the same length (relative tolerance 1e-12).
  std::optional<double> side_length() const noexcept { return side_length_; }

  /// Cyclic vertex access.
  Point vertex(std::ptrdiff_t k) const;
  /// Interior angle at vertex k, in radians.
  double interior_angle(std::ptrdiff_t k) const;
  double edge_length(std::ptrdiff_t k) const;

  double area() const;
  double perimeter() const;
  double diameter() const;
  /// Absolute geometric tolerance, 1e-12 times the diameter.
  double tolerance() const { return 1e-12 * diameter_; }

 private:
  std::vector<Point> vertices_;
  std::vector<double> angle_fractions_;
  std::optional<double> side_length_;
  int level_ = 0;
  double diameter_ = 0.0;
};

enum class Location { kInside, kBoundary, kOutside };

/// Signed area of the triangle (a, b, c) times two.
inline double orient(Point a, Point b, Point c) { return cross(b - a, c - a); }

double distance_to_segment(Point p, Point a, Point b);

/// True when segments [a,b] and [c,d] cross at a single interior point of both,
/// each endpoint lying farther than tol from the other segment's line.
bool segments_cross_properly(Point a, Point b, Point c, Point d, double tol);

/// True when the closed segments share any point (within tol).
bool segments_touch(Point a, Point b, Point c, Point d, double tol);

/// Uniform bucket grid over the edges of a polygon. Answers point location and
/// boundary distance queries without scanning every edge.
class EdgeIndex {
 public:
  explicit EdgeIndex(const Polygon& polygon);

  const Polygon& polygon() const noexcept { return *polygon_; }

  Location locate(Point p, double tol) const;
  double distance_to_boundary(Point p) const;

  /// Edge indices whose bounding boxes meet the box [lo, hi] (no duplicates).
  std::vector<std::size_t> edges_near(Point lo, Point hi) const;

 private:
  std::pair<int, int> cell_of(Point p) const;

  const Polygon* polygon_;
  Point origin_;
  double cell_ = 1.0;
  int nx_ = 1;
  int ny_ = 1;
  std::vector<std::vector<std::size_t>> buckets_;
};

Location locate(const Polygon& polygon, Point p, double tol);

/// First pair of non-adjacent edges that touch, or adjacent edges that fold
/// back onto each other. Empty when the boundary is a Jordan curve.
std::optional<std::pair<std::size_t, std::size_t>> find_self_intersection(const Polygon& polygon);

inline bool is_simple(const Polygon& polygon) { return !find_self_intersection(polygon).has_value(); }

/// Closed containment: no vertex or edge midpoint of `inner` lies outside
/// `outer`, and no pair of edges crosses properly. Shared boundary is allowed.
bool contains(const Polygon& outer, const Polygon& inner, double tol);

/// Inradius estimate: largest boundary distance over a sample grid refined
/// around the best point. Accurate to about 1e-9 of the diameter.
double inradius(const Polygon& polygon);

}  // namespace fracspec::geometry
