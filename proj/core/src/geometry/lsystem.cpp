#include "fracspec/geometry/lsystem.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

#include "fracspec/error.hpp"

namespace fracspec::geometry {
namespace {

// Vertices of the rule path in a local frame, starting at 0 with heading +x.
std::vector<Point> rule_path(const std::string& rule, double turn) {
  std::vector<Point> path{0.0};
  Complex heading = 1.0;
  for (char c : rule) {
    switch (c) {
      case 'F': path.push_back(path.back() + heading); break;
      case '+': heading *= std::polar(1.0, -turn); break;
      case '-': heading *= std::polar(1.0, turn); break;
      default: fail(ErrorKind::kConfig, std::string("unknown rule symbol '") + c + "'");
    }
  }
  return path;
}

Polygon regular_polygon(int sides, double side_length) {
  require(sides >= 3, ErrorKind::kConfig, "base polygon needs at least three sides");
  const double circumradius = side_length / (2 * std::sin(kPi / sides));
  std::vector<Point> v;
  for (int k = 0; k < sides; ++k) v.push_back(std::polar(circumradius, kPi / 2 + 2 * kPi * k / sides));
  return Polygon(std::move(v));
}

double max_angle(const Polygon& p) {
  double m = 0.0;
  for (double a : p.angle_fractions()) m = std::max({m, a, 2.0 - a});
  return m * kPi;
}

std::vector<Point> expand(const std::vector<Point>& v, const std::vector<Point>& path) {
  const Point chord = path.back();
  std::vector<Point> out;
  out.reserve(v.size() * (path.size() - 1));
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Point a = v[k], b = v[(k + 1) % v.size()];
    const Complex s = (b - a) / chord;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) out.push_back(a + s * path[i]);
  }
  return out;
}

FractalFamily make_family(std::string name, FamilyKind kind, Polygon base, std::string rule, double turn,
                          int symmetry_order) {
  FractalFamily f;
  f.name = std::move(name);
  f.kind = kind;
  f.base = std::move(base);
  f.rule = std::move(rule);
  f.turn_angle = turn;
  f.symmetry_order = symmetry_order;
  // Levels >= 1 share the same angle set, so two levels fix the bound.
  f.max_angle_bound = std::max(max_angle(f.base), max_angle(lsystem_boundary(f, 1)));
  return f;
}

}  // namespace

double FractalFamily::scale() const { return 1.0 / std::abs(rule_path(rule, turn_angle).back()); }

int FractalFamily::segments_per_edge() const { return static_cast<int>(std::count(rule.begin(), rule.end(), 'F')); }

FractalFamily koch_family() {
  return make_family("koch", FamilyKind::kKoch, regular_polygon(3, std::sqrt(3.0)), "F+F--F+F", kPi / 3, 3);
}

FractalFamily koch_general_family(double alpha, int sides) {
  require(alpha > 0 && alpha < kPi / 2, ErrorKind::kConfig, "koch-general angle must lie in (0, pi/2)");
  return make_family("koch-general", FamilyKind::kKochGeneral, regular_polygon(sides, 1.0), "F+F--F+F", alpha,
                     sides);
}

FractalFamily cesaro_family(double alpha, int sides) {
  require(alpha > 0 && alpha < kPi / 2, ErrorKind::kConfig, "cesaro angle must lie in (0, pi/2)");
  return make_family("cesaro", FamilyKind::kCesaro, regular_polygon(sides, 1.0), "F-F++F-F", alpha, sides);
}

FractalFamily quadric_family() {
  Polygon square({{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}});
  return make_family("quadric", FamilyKind::kQuadric, std::move(square), "F+F-F-FF+F+F-F", kPi / 2, 4);
}

FractalFamily gosper_family() {
  return make_family("gosper", FamilyKind::kGosper, regular_polygon(6, 1.0), "F+F-F", kPi / 2, 6);
}

FractalFamily family_by_name(const std::string& name) {
  if (name == "koch") return koch_family();
  if (name == "quadric") return quadric_family();
  if (name == "gosper") return gosper_family();
  static const std::regex with_angle(R"((koch-general|cesaro)\(([-+0-9.eE]+)\))");
  std::smatch m;
  if (std::regex_match(name, m, with_angle)) {
    const double alpha = std::stod(m[2].str());
    return m[1] == "cesaro" ? cesaro_family(alpha) : koch_general_family(alpha);
  }
  fail(ErrorKind::kConfig, "unknown family '" + name + "'");
}

Polygon lsystem_boundary(const FractalFamily& family, int j) {
  require(j >= 0, ErrorKind::kPrecondition, "level must be nonnegative");
  const std::vector<Point> path = rule_path(family.rule, family.turn_angle);
  require(path.size() >= 2 && std::abs(path.back()) > 0.0, ErrorKind::kConfig, "rule path must have distinct ends");
  const double growth = static_cast<double>(path.size() - 1);
  require(static_cast<double>(family.base.size()) * std::pow(growth, j) <= static_cast<double>(kMaxLsystemVertices),
          ErrorKind::kConfig, "level " + std::to_string(j) + " of " + family.name + " is too large");
  std::vector<Point> v = family.base.vertices();
  for (int level = 0; level < j; ++level) v = expand(v, path);
  Polygon out(std::move(v), j);
  if (auto hit = find_self_intersection(out))
    fail(ErrorKind::kHypothesis, family.name + " level " + std::to_string(j) + " is not a Jordan curve (edges " +
                                     std::to_string(hit->first) + ", " + std::to_string(hit->second) + ")");
  return out;
}

}  // namespace fracspec::geometry
