#include "fracspec/fem/triangle_quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "fracspec/error.hpp"
#include "fracspec/fem/lagrange.hpp"
#include "fracspec/quadrature.hpp"

namespace fracspec::fem {

const TriangleRule& collapsed_gauss(int degree) {
  static std::mutex mutex;
  static std::map<int, TriangleRule> cache;
  const std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(degree);
  if (it != cache.end()) return it->second;
  const int n = degree / 2 + 1;
  const Rule1d& across = gauss_legendre(n);
  const Rule1d& along = gauss_jacobi(n, 1.0, 0.0);
  TriangleRule rule;
  rule.degree = degree;
  for (int j = 0; j < n; ++j) {
    const double v = 0.5 * (1.0 + along.nodes[j]);
    for (int i = 0; i < n; ++i) {
      const double u = 0.5 * (1.0 + across.nodes[i]);
      rule.x.push_back(u * (1.0 - v));
      rule.y.push_back(v);
      rule.w.push_back(0.125 * across.weights[i] * along.weights[j]);
    }
  }
  return cache.emplace(degree, std::move(rule)).first->second;
}

int quadrature_degree(int p, WeightKind kind) {
  require(p >= 1 && p <= kMaxOrder, ErrorKind::kConfig, "element order must be in [1, 8]");
  return kind == WeightKind::kInterior ? 2 * p + 4 : 2 * p + 10;
}

ElementQuadrature::ElementQuadrature(const TriangleMesh& mesh, int p, const Weight& weight,
                                     ElementQuadratureOptions options)
    : mesh_(mesh), p_(p), weight_(weight), options_(options), edges_(build_edges(mesh)), h_(mesh.element_size()) {
  quadrature_degree(p, WeightKind::kInterior);
  near_singular_.assign(mesh.triangles.size(), false);
  const auto& singular = weight.singular_points();
  if (singular.empty()) return;
  for (std::size_t e = 0; e < mesh.triangles.size(); ++e)
    for (std::size_t v : mesh.triangles[e])
      for (const Point& s : singular)
        if (std::abs(mesh.vertices[v] - s) < 1.5 * h_) near_singular_[e] = true;
}

bool ElementQuadrature::touches_boundary(std::size_t e) const {
  const auto& t = mesh_.triangles[e];
  return mesh_.boundary_vertex[t[0]] || mesh_.boundary_vertex[t[1]] || mesh_.boundary_vertex[t[2]];
}

long ElementQuadrature::nearest_singular(Point z, double radius) const {
  long best = -1;
  double best_d = radius;
  const auto& singular = weight_.singular_points();
  for (std::size_t i = 0; i < singular.size(); ++i) {
    const double d = std::abs(singular[i] - z);
    if (d <= best_d) {
      best_d = d;
      best = static_cast<long>(i);
    }
  }
  return best;
}

void ElementQuadrature::add_rule(std::vector<QuadPoint>& out, Point a, Point b, Point c, int degree) const {
  const TriangleRule& rule = collapsed_gauss(degree);
  const double jac = std::abs(cross(b - a, c - a));
  for (std::size_t q = 0; q < rule.w.size(); ++q)
    out.push_back({a + rule.x[q] * (b - a) + rule.y[q] * (c - a), rule.w[q] * jac, -1, 0.0});
}

void ElementQuadrature::add_graded(std::vector<QuadPoint>& out, Point apex, Point b, Point c, long singular,
                                   Point apex_offset) const {
  // apex + r (b - apex) + r s (c - b), area element |2 A| r dr ds.
  const double jac = std::abs(cross(b - apex, c - apex));
  const Rule1d& radial = gauss_legendre(options_.radial_points);
  const Rule1d& angular = gauss_legendre(p_ + 4);
  double outer = 1.0;
  for (int layer = 0; layer <= options_.grading_layers; ++layer) {
    const double inner = layer == options_.grading_layers ? 0.0 : outer * options_.grading_ratio;
    const double half = 0.5 * (outer - inner);
    for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
      const double r = inner + half * (1.0 + radial.nodes[i]);
      for (std::size_t k = 0; k < angular.nodes.size(); ++k) {
        const double s = 0.5 * (1.0 + angular.nodes[k]);
        const Complex step = r * ((b - apex) + s * (c - b));
        out.push_back({apex + step, jac * r * half * radial.weights[i] * 0.5 * angular.weights[k], singular,
                       apex_offset + step});
      }
    }
    outer = inner;
  }
}

void ElementQuadrature::add_piece(std::vector<QuadPoint>& out, Point c, Point x, long sx, Point y, long sy) const {
  const auto& singular = weight_.singular_points();
  const int degree = quadrature_degree(p_, WeightKind::kBoundary);
  if (sx < 0 && sy < 0) {
    add_rule(out, c, x, y, degree);
  } else if (sy < 0) {
    add_graded(out, x, y, c, sx, x - singular[static_cast<std::size_t>(sx)]);
  } else if (sx < 0) {
    add_graded(out, y, c, x, sy, y - singular[static_cast<std::size_t>(sy)]);
  } else {
    const Point m = 0.5 * (x + y);
    add_graded(out, x, m, c, sx, x - singular[static_cast<std::size_t>(sx)]);
    add_graded(out, y, c, m, sy, y - singular[static_cast<std::size_t>(sy)]);
  }
}

std::vector<QuadPoint> ElementQuadrature::points(std::size_t e) const {
  std::vector<QuadPoint> out;
  const auto& t = mesh_.triangles[e];
  const Point a = mesh_.vertices[t[0]], b = mesh_.vertices[t[1]], c = mesh_.vertices[t[2]];
  if (weight_.is_unit() || !touches_boundary(e)) {
    add_rule(out, a, b, c, quadrature_degree(p_, near_singular_[e] ? WeightKind::kBoundary : WeightKind::kInterior));
    return out;
  }
  const auto& singular = weight_.singular_points();
  const Point centre = (a + b + c) / 3.0;
  for (int k = 0; k < 3; ++k) {
    const std::size_t ix = t[(k + 1) % 3], iy = t[(k + 2) % 3];
    const Point x = mesh_.vertices[ix], y = mesh_.vertices[iy];
    auto label = [&](std::size_t vertex) {
      return mesh_.boundary_vertex[vertex] ? nearest_singular(mesh_.vertices[vertex], 0.5 * h_) : -1L;
    };
    std::vector<std::pair<double, long>> cuts;  // (position along x -> y, singular index)
    if (edges_.is_boundary(edges_.of_triangle[e][k])) {
      const double len = std::abs(y - x);
      for (std::size_t i = 0; i < singular.size(); ++i) {
        if (geometry::distance_to_segment(singular[i], x, y) > 1e-9 * h_) continue;
        const double s = dot(singular[i] - x, y - x) / (len * len);
        if (s > 1e-12 && s < 1.0 - 1e-12) cuts.emplace_back(s, static_cast<long>(i));
      }
      std::sort(cuts.begin(), cuts.end());
    }
    Point from = x;
    long from_label = label(ix);
    for (const auto& [s, i] : cuts) {
      const Point to = singular[static_cast<std::size_t>(i)];
      add_piece(out, centre, from, from_label, to, i);
      from = to;
      from_label = i;
    }
    add_piece(out, centre, from, from_label, y, label(iy));
  }
  return out;
}

}  // namespace fracspec::fem
