#include "fracspec/geometry/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fracspec/error.hpp"

namespace fracspec::geometry {
namespace {

// Snaps x to p/q when |x - p/q| < 1e-10 for some q <= 24.
double snap_rational(double x) {
  for (int q = 1; q <= 24; ++q) {
    const double p = std::round(x * q);
    if (std::abs(x - p / q) < 1e-10) return p / q;
  }
  return x;
}

double signed_area(const std::vector<Point>& v) {
  double twice = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) twice += cross(v[k], v[(k + 1) % v.size()]);
  return 0.5 * twice;
}

}  // namespace

Polygon::Polygon(std::vector<Point> vertices, int level) : vertices_(std::move(vertices)), level_(level) {
  const std::size_t n = vertices_.size();
  require(n >= 3, ErrorKind::kPrecondition, "polygon needs at least three vertices");
  if (signed_area(vertices_) < 0.0) std::reverse(vertices_.begin() + 1, vertices_.end());

  double lo_x = std::numeric_limits<double>::max(), hi_x = -lo_x, lo_y = lo_x, hi_y = -lo_x;
  for (const Point& p : vertices_) {
    lo_x = std::min(lo_x, p.real());
    hi_x = std::max(hi_x, p.real());
    lo_y = std::min(lo_y, p.imag());
    hi_y = std::max(hi_y, p.imag());
  }
  diameter_ = std::hypot(hi_x - lo_x, hi_y - lo_y);

  angle_fractions_.resize(n);
  double min_edge = std::numeric_limits<double>::max(), max_edge = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Point prev = vertices_[(k + n - 1) % n];
    const Point here = vertices_[k];
    const Point next = vertices_[(k + 1) % n];
    require(std::abs(next - here) > 1e-14 * diameter_, ErrorKind::kPrecondition,
            "polygon has repeated consecutive vertices");
    const double turning = std::arg((next - here) / (here - prev));
    angle_fractions_[k] = snap_rational(1.0 - turning / kPi);
    min_edge = std::min(min_edge, std::abs(next - here));
    max_edge = std::max(max_edge, std::abs(next - here));
  }
  if (max_edge - min_edge <= 1e-12 * max_edge) side_length_ = 0.5 * (max_edge + min_edge);
}

Point Polygon::vertex(std::ptrdiff_t k) const {
  const auto n = static_cast<std::ptrdiff_t>(vertices_.size());
  return vertices_[static_cast<std::size_t>(((k % n) + n) % n)];
}

double Polygon::interior_angle(std::ptrdiff_t k) const {
  const auto n = static_cast<std::ptrdiff_t>(vertices_.size());
  return kPi * angle_fractions_[static_cast<std::size_t>(((k % n) + n) % n)];
}

double Polygon::edge_length(std::ptrdiff_t k) const { return std::abs(vertex(k + 1) - vertex(k)); }

double Polygon::area() const { return signed_area(vertices_); }

double Polygon::perimeter() const {
  double total = 0.0;
  for (std::size_t k = 0; k < size(); ++k) total += edge_length(static_cast<std::ptrdiff_t>(k));
  return total;
}

double Polygon::diameter() const { return diameter_; }

double distance_to_segment(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

bool segments_cross_properly(Point a, Point b, Point c, Point d, double tol) {
  // Orientation values are scaled by segment length to become distances.
  const double lab = std::abs(b - a), lcd = std::abs(d - c);
  if (lab == 0.0 || lcd == 0.0) return false;
  const double oc = orient(a, b, c) / lab, od = orient(a, b, d) / lab;
  const double oa = orient(c, d, a) / lcd, ob = orient(c, d, b) / lcd;
  return ((oc > tol && od < -tol) || (oc < -tol && od > tol)) &&
         ((oa > tol && ob < -tol) || (oa < -tol && ob > tol));
}

bool segments_touch(Point a, Point b, Point c, Point d, double tol) {
  if (segments_cross_properly(a, b, c, d, 0.0)) return true;
  return distance_to_segment(a, c, d) <= tol || distance_to_segment(b, c, d) <= tol ||
         distance_to_segment(c, a, b) <= tol || distance_to_segment(d, a, b) <= tol;
}

EdgeIndex::EdgeIndex(const Polygon& polygon) : polygon_(&polygon) {
  const auto& v = polygon.vertices();
  double lo_x = v[0].real(), hi_x = lo_x, lo_y = v[0].imag(), hi_y = lo_y;
  for (const Point& p : v) {
    lo_x = std::min(lo_x, p.real());
    hi_x = std::max(hi_x, p.real());
    lo_y = std::min(lo_y, p.imag());
    hi_y = std::max(hi_y, p.imag());
  }
  const double pad = 1e-9 * polygon.diameter() + 1e-300;
  origin_ = {lo_x - pad, lo_y - pad};
  const double w = hi_x - lo_x + 2 * pad, h = hi_y - lo_y + 2 * pad;
  const double cells = std::max(1.0, static_cast<double>(v.size()));
  cell_ = std::max(std::sqrt(w * h / cells), 1e-300);
  nx_ = std::max(1, static_cast<int>(std::ceil(w / cell_)));
  ny_ = std::max(1, static_cast<int>(std::ceil(h / cell_)));
  buckets_.assign(static_cast<std::size_t>(nx_) * ny_, {});
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Point a = v[k], b = v[(k + 1) % v.size()];
    auto [i0, j0] = cell_of({std::min(a.real(), b.real()), std::min(a.imag(), b.imag())});
    auto [i1, j1] = cell_of({std::max(a.real(), b.real()), std::max(a.imag(), b.imag())});
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) buckets_[static_cast<std::size_t>(j) * nx_ + i].push_back(k);
  }
}

std::pair<int, int> EdgeIndex::cell_of(Point p) const {
  const int i = static_cast<int>(std::floor((p.real() - origin_.real()) / cell_));
  const int j = static_cast<int>(std::floor((p.imag() - origin_.imag()) / cell_));
  return {std::clamp(i, 0, nx_ - 1), std::clamp(j, 0, ny_ - 1)};
}

std::vector<std::size_t> EdgeIndex::edges_near(Point lo, Point hi) const {
  auto [i0, j0] = cell_of(lo);
  auto [i1, j1] = cell_of(hi);
  std::vector<std::size_t> out;
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i) {
      const auto& bucket = buckets_[static_cast<std::size_t>(j) * nx_ + i];
      out.insert(out.end(), bucket.begin(), bucket.end());
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double EdgeIndex::distance_to_boundary(Point p) const {
  const auto& v = polygon_->vertices();
  const std::size_t n = v.size();
  // Grow a search box until it holds a candidate whose distance fits inside it.
  double radius = cell_;
  const double limit = 4.0 * polygon_->diameter() + 4.0 * cell_;
  for (;;) {
    double best = std::numeric_limits<double>::max();
    for (std::size_t k : edges_near(p - Point(radius, radius), p + Point(radius, radius)))
      best = std::min(best, distance_to_segment(p, v[k], v[(k + 1) % n]));
    if (best <= radius || radius > limit) {
      if (best == std::numeric_limits<double>::max()) {
        for (std::size_t k = 0; k < n; ++k) best = std::min(best, distance_to_segment(p, v[k], v[(k + 1) % n]));
      }
      return best;
    }
    radius *= 2.0;
  }
}

Location EdgeIndex::locate(Point p, double tol) const {
  const auto& v = polygon_->vertices();
  const std::size_t n = v.size();
  const double pad = tol + 1e-300;
  for (std::size_t k : edges_near(p - Point(pad, pad), p + Point(pad, pad)))
    if (distance_to_segment(p, v[k], v[(k + 1) % n]) <= tol) return Location::kBoundary;

  // Crossing number along the ray to +x, restricted to the cells it passes.
  auto [i0, j] = cell_of(p);
  std::vector<std::size_t> candidates;
  for (int i = i0; i < nx_; ++i) {
    const auto& bucket = buckets_[static_cast<std::size_t>(j) * nx_ + i];
    candidates.insert(candidates.end(), bucket.begin(), bucket.end());
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  bool inside = false;
  for (std::size_t k : candidates) {
    const Point a = v[k], b = v[(k + 1) % n];
    if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
      const double x = a.real() + (p.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
      if (x > p.real()) inside = !inside;
    }
  }
  return inside ? Location::kInside : Location::kOutside;
}

Location locate(const Polygon& polygon, Point p, double tol) { return EdgeIndex(polygon).locate(p, tol); }

std::optional<std::pair<std::size_t, std::size_t>> find_self_intersection(const Polygon& polygon) {
  const auto& v = polygon.vertices();
  const std::size_t n = v.size();
  const double tol = polygon.tolerance();
  for (std::size_t k = 0; k < n; ++k) {
    // Adjacent edges fold back when the turn is a full reversal.
    const Point d0 = v[k] - v[(k + n - 1) % n], d1 = v[(k + 1) % n] - v[k];
    if (std::abs(cross(d0, d1)) <= tol * std::abs(d0) && dot(d0, d1) < 0.0) return std::make_pair((k + n - 1) % n, k);
  }
  const EdgeIndex index(polygon);
  for (std::size_t k = 0; k < n; ++k) {
    const Point a = v[k], b = v[(k + 1) % n];
    const Point lo(std::min(a.real(), b.real()) - tol, std::min(a.imag(), b.imag()) - tol);
    const Point hi(std::max(a.real(), b.real()) + tol, std::max(a.imag(), b.imag()) + tol);
    for (std::size_t m : index.edges_near(lo, hi)) {
      if (m <= k) continue;
      if (m == k + 1 || (k == 0 && m == n - 1)) continue;
      if (segments_touch(a, b, v[m], v[(m + 1) % n], tol)) return std::make_pair(k, m);
    }
  }
  return std::nullopt;
}

bool contains(const Polygon& outer, const Polygon& inner, double tol) {
  const EdgeIndex outer_index(outer);
  const auto& w = inner.vertices();
  const auto& u = outer.vertices();
  const std::size_t n = w.size(), m = u.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Point a = w[k], b = w[(k + 1) % n];
    if (outer_index.locate(a, tol) == Location::kOutside) return false;
    if (outer_index.locate(0.5 * (a + b), tol) == Location::kOutside) return false;
    const Point lo(std::min(a.real(), b.real()) - tol, std::min(a.imag(), b.imag()) - tol);
    const Point hi(std::max(a.real(), b.real()) + tol, std::max(a.imag(), b.imag()) + tol);
    for (std::size_t e : outer_index.edges_near(lo, hi))
      if (segments_cross_properly(a, b, u[e], u[(e + 1) % m], tol)) return false;
  }
  return true;
}

double inradius(const Polygon& polygon) {
  const EdgeIndex index(polygon);
  const auto& v = polygon.vertices();
  double lo_x = v[0].real(), hi_x = lo_x, lo_y = v[0].imag(), hi_y = lo_y;
  for (const Point& p : v) {
    lo_x = std::min(lo_x, p.real());
    hi_x = std::max(hi_x, p.real());
    lo_y = std::min(lo_y, p.imag());
    hi_y = std::max(hi_y, p.imag());
  }
  const double tol = polygon.tolerance();
  auto value = [&](Point p) {
    return index.locate(p, tol) == Location::kInside ? index.distance_to_boundary(p) : 0.0;
  };
  constexpr int kGrid = 64;
  Point best = v[0];
  double best_value = 0.0;
  for (int j = 0; j <= kGrid; ++j)
    for (int i = 0; i <= kGrid; ++i) {
      const Point p(lo_x + (hi_x - lo_x) * i / kGrid, lo_y + (hi_y - lo_y) * j / kGrid);
      const double d = value(p);
      if (d > best_value) {
        best_value = d;
        best = p;
      }
    }
  // Compass search on the distance function.
  double step = std::max(hi_x - lo_x, hi_y - lo_y) / kGrid;
  const Point dirs[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  while (step > 1e-10 * polygon.diameter()) {
    bool improved = false;
    for (Point d : dirs) {
      const Point q = best + step * d;
      const double dq = value(q);
      if (dq > best_value) {
        best_value = dq;
        best = q;
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  return best_value;
}

}  // namespace fracspec::geometry
