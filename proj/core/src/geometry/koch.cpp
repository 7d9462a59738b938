#include "fracspec/geometry/koch.hpp"

#include <cmath>
#include <string>

#include "fracspec/error.hpp"

namespace fracspec::geometry {
namespace {

void check_level(int j) {
  require(j >= 0, ErrorKind::kPrecondition, "level must be nonnegative");
  require(j <= kMaxKochLevel, ErrorKind::kConfig,
          "level " + std::to_string(j) + " exceeds the size limit " + std::to_string(kMaxKochLevel));
}

// Replaces every edge p1 -> p2 by the four edges through the thirds and the
// apex p1' + (p2' - p1') * turn.
std::vector<Point> subdivide(const std::vector<Point>& v, Complex turn) {
  std::vector<Point> out;
  out.reserve(4 * v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Point a = v[k], b = v[(k + 1) % v.size()];
    const Point p1 = a + (b - a) / 3.0, p2 = a + 2.0 * (b - a) / 3.0;
    out.push_back(a);
    out.push_back(p1);
    out.push_back(p1 + (p2 - p1) * turn);
    out.push_back(p2);
  }
  return out;
}

std::vector<Point> regular_ngon(int n, double circumradius) {
  std::vector<Point> v;
  for (int k = 0; k < n; ++k) v.push_back(std::polar(circumradius, kPi / 2 + 2 * kPi * k / n));
  return v;
}

std::vector<Point> grid_samples(const Polygon& polygon, double spacing) {
  double lo_x = polygon.vertex(0).real(), hi_x = lo_x, lo_y = polygon.vertex(0).imag(), hi_y = lo_y;
  for (const Point& p : polygon.vertices()) {
    lo_x = std::min(lo_x, p.real());
    hi_x = std::max(hi_x, p.real());
    lo_y = std::min(lo_y, p.imag());
    hi_y = std::max(hi_y, p.imag());
  }
  std::vector<Point> out;
  const int nx = static_cast<int>(std::ceil((hi_x - lo_x) / spacing));
  const int ny = static_cast<int>(std::ceil((hi_y - lo_y) / spacing));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) out.emplace_back(lo_x + i * spacing, lo_y + j * spacing);
  return out;
}

bool collar_holds(const Polygon& outer, const EdgeIndex& outer_index, const EdgeIndex& inner_index,
                  double width, std::size_t& samples) {
  const double tol = 1e-9 * width;
  auto check = [&](Point p) {
    if (outer_index.locate(p, 0.0) != Location::kInside) return true;
    if (outer_index.distance_to_boundary(p) < width - tol) return true;
    ++samples;
    return inner_index.locate(p, tol) != Location::kOutside;
  };
  for (const Point& p : grid_samples(outer, width / 4))
    if (!check(p)) return false;
  for (const Point& p : inner_index.polygon().vertices())
    if (!check(p)) return false;
  return true;
}

}  // namespace

Polygon koch_inner(int j) {
  check_level(j);
  std::vector<Point> v = regular_ngon(3, 1.0);
  for (int level = 0; level < j; ++level) v = subdivide(v, std::polar(1.0, -kPi / 3));
  return Polygon(std::move(v), j);
}

Polygon koch_outer(int j) {
  check_level(j);
  std::vector<Point> v = regular_ngon(6, 1.0);
  for (int level = 0; level < j; ++level) v = subdivide(v, std::polar(1.0, kPi / 3));
  return Polygon(std::move(v), j);
}

InterpolationPair koch_pair(int j) { return {koch_inner(j), koch_outer(j), j, 0.0}; }

std::vector<std::size_t> koch_fixed_indices(const Polygon& polygon) {
  const std::size_t stride = std::size_t{1} << (2 * polygon.level());
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < polygon.size(); k += stride) out.push_back(k);
  return out;
}

double koch_inner_side(int j) { return std::sqrt(3.0) / std::pow(3.0, j); }

KochNestingReport verify_koch_nesting(const InterpolationPair& pair_j, const InterpolationPair& pair_j1) {
  require(pair_j1.level == pair_j.level + 1, ErrorKind::kPrecondition, "levels must be consecutive");
  for (const Polygon* p : {&pair_j.inner, &pair_j.outer, &pair_j1.inner, &pair_j1.outer}) {
    if (auto hit = find_self_intersection(*p))
      fail(ErrorKind::kHypothesis, "polygon at level " + std::to_string(p->level()) + " self-intersects at edges " +
                                       std::to_string(hit->first) + " and " + std::to_string(hit->second));
  }
  KochNestingReport report;
  report.level = pair_j.level;
  const double tol = pair_j.outer.tolerance();
  report.inner_nested = contains(pair_j1.inner, pair_j.inner, tol);
  report.outer_nested = contains(pair_j.outer, pair_j1.outer, tol);
  report.pair_nested = contains(pair_j.outer, pair_j.inner, tol);
  report.next_pair_nested = contains(pair_j1.outer, pair_j1.inner, tol);

  const EdgeIndex outer_index(pair_j.outer), inner_index(pair_j.inner);
  report.collar_width = koch_inner_side(pair_j.level) / 4;
  report.collar_holds = collar_holds(pair_j.outer, outer_index, inner_index, report.collar_width, report.collar_samples);
  std::size_t nominal_samples = 0;
  report.nominal_collar_width = std::pow(3.0, -(pair_j.level + 1));
  report.nominal_collar_holds =
      collar_holds(pair_j.outer, outer_index, inner_index, report.nominal_collar_width, nominal_samples);
  return report;
}

}  // namespace fracspec::geometry
