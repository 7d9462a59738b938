#include "fracspec/fem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fracspec/error.hpp"
#include "fracspec/geometry/koch.hpp"
#include "json.hpp"

namespace fracspec::fem {

double TriangleMesh::element_area(std::size_t e) const {
  const auto& t = triangles[e];
  return 0.5 * cross(vertices[t[1]] - vertices[t[0]], vertices[t[2]] - vertices[t[0]]);
}

double TriangleMesh::element_size() const {
  const auto& t = triangles.at(0);
  return std::abs(vertices[t[1]] - vertices[t[0]]);
}

double TriangleMesh::total_area() const {
  double a = 0.0;
  for (std::size_t e = 0; e < triangles.size(); ++e) a += element_area(e);
  return a;
}

EdgeTable build_edges(const TriangleMesh& mesh) {
  EdgeTable table;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  table.of_triangle.resize(mesh.triangles.size());
  for (std::size_t e = 0; e < mesh.triangles.size(); ++e) {
    const auto& t = mesh.triangles[e];
    for (int k = 0; k < 3; ++k) {
      const std::size_t a = t[(k + 1) % 3], b = t[(k + 2) % 3];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = index.try_emplace(key, table.edges.size());
      if (inserted) {
        table.edges.push_back({key.first, key.second});
        table.neighbours.push_back({static_cast<long>(e), -1});
      } else {
        require(table.neighbours[it->second][1] < 0, ErrorKind::kPrecondition, "edge shared by three triangles");
        table.neighbours[it->second][1] = static_cast<long>(e);
      }
      table.of_triangle[e][k] = it->second;
    }
  }
  return table;
}

namespace {

void mark_boundary(TriangleMesh& mesh) {
  const EdgeTable edges = build_edges(mesh);
  mesh.boundary_vertex.assign(mesh.vertices.size(), false);
  for (std::size_t i = 0; i < edges.edges.size(); ++i) {
    if (!edges.is_boundary(i)) continue;
    mesh.boundary_vertex[edges.edges[i][0]] = true;
    mesh.boundary_vertex[edges.edges[i][1]] = true;
  }
}

}  // namespace

TriangleMesh initial_mesh(BaseShape shape) {
  TriangleMesh mesh;
  mesh.shape = shape;
  if (shape == BaseShape::kTriangle) {
    const geometry::Polygon base = geometry::koch_inner(0);
    const auto& v = base.vertices();
    mesh.vertices = {v[0], v[1], v[2], 0.5 * (v[0] + v[1]), 0.5 * (v[1] + v[2]), 0.5 * (v[2] + v[0])};
    mesh.triangles = {{0, 3, 5}, {3, 1, 4}, {5, 4, 2}, {3, 4, 5}};
  } else {
    const geometry::Polygon base = geometry::koch_outer(0);
    const auto& v = base.vertices();
    mesh.vertices = {0.0};
    for (const Point& p : v) mesh.vertices.push_back(p);
    for (std::size_t k = 0; k < 6; ++k) mesh.triangles.push_back({0, 1 + k, 1 + (k + 1) % 6});
  }
  mark_boundary(mesh);
  return mesh;
}

TriangleMesh refine(const TriangleMesh& mesh) {
  TriangleMesh out;
  out.shape = mesh.shape;
  out.refinement_level = mesh.refinement_level + 1;
  out.vertices = mesh.vertices;
  const EdgeTable edges = build_edges(mesh);
  std::vector<std::size_t> midpoint(edges.edges.size());
  for (std::size_t i = 0; i < edges.edges.size(); ++i) {
    midpoint[i] = out.vertices.size();
    out.vertices.push_back(0.5 * (mesh.vertices[edges.edges[i][0]] + mesh.vertices[edges.edges[i][1]]));
  }
  out.triangles.reserve(4 * mesh.triangles.size());
  for (std::size_t e = 0; e < mesh.triangles.size(); ++e) {
    const auto& t = mesh.triangles[e];
    // of_triangle[k] is opposite local vertex k.
    const std::size_t m0 = midpoint[edges.of_triangle[e][0]];
    const std::size_t m1 = midpoint[edges.of_triangle[e][1]];
    const std::size_t m2 = midpoint[edges.of_triangle[e][2]];
    out.triangles.push_back({t[0], m2, m1});
    out.triangles.push_back({m2, t[1], m0});
    out.triangles.push_back({m1, m0, t[2]});
    out.triangles.push_back({m0, m1, m2});
  }
  mark_boundary(out);
  return out;
}

TriangleMesh uniform_mesh(BaseShape shape, int refinements) {
  require(refinements >= 0 && refinements <= 10, ErrorKind::kConfig, "refinements must be in [0, 10]");
  TriangleMesh mesh = initial_mesh(shape);
  for (int r = 0; r < refinements; ++r) mesh = refine(mesh);
  return mesh;
}

double congruence_defect(const TriangleMesh& mesh) {
  const double h = mesh.element_size();
  const double area = std::sqrt(3.0) / 4.0 * h * h;
  double worst = 0.0;
  for (std::size_t e = 0; e < mesh.triangles.size(); ++e) {
    const auto& t = mesh.triangles[e];
    worst = std::max(worst, std::abs(mesh.element_area(e) - area) / area);
    for (int k = 0; k < 3; ++k)
      worst = std::max(worst, std::abs(std::abs(mesh.vertices[t[(k + 1) % 3]] - mesh.vertices[t[k]]) - h) / h);
  }
  return worst;
}

std::string mesh_to_json(const TriangleMesh& mesh) {
  nlohmann::json j;
  auto& v = j["vertices"] = nlohmann::json::array();
  for (const Point& p : mesh.vertices) v.push_back({p.real(), p.imag()});
  j["triangles"] = mesh.triangles;
  j["boundary"] = mesh.boundary_vertex;
  j["refinement"] = mesh.refinement_level;
  j["shape"] = mesh.shape == BaseShape::kTriangle ? "triangle" : "hexagon";
  return j.dump();
}

}  // namespace fracspec::fem
