#include "fracspec/geometry/interpolants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracspec/error.hpp"

namespace fracspec::geometry {
namespace {

// Unit direction of the interior-angle bisector at vertex k.
Complex inner_bisector(const Polygon& s, std::size_t k) {
  const auto kk = static_cast<std::ptrdiff_t>(k);
  const Point a = s.vertex(kk);
  const Complex out_dir = (s.vertex(kk + 1) - a) / s.edge_length(kk);
  return out_dir * std::polar(1.0, 0.5 * s.interior_angle(kk));
}

double offset_distance(const Polygon& s, std::size_t k, double eps) {
  return eps / std::sin(0.5 * s.interior_angle(static_cast<std::ptrdiff_t>(k)));
}

CornerOffset offsets_unchecked(const Polygon& s, std::size_t k, double eps) {
  const Point a = s.vertex(static_cast<std::ptrdiff_t>(k));
  const Complex d = offset_distance(s, k, eps) * inner_bisector(s, k);
  return {a + d, a - d};
}

// Distance along the ray a + t*dir (t > 0) to the first edge not incident to
// vertex k.
double first_hit(const Polygon& s, const EdgeIndex& index, std::size_t k, Complex dir) {
  const std::size_t n = s.size();
  const Point a = s.vertices()[k];
  const std::size_t prev = (k + n - 1) % n;
  double radius = s.edge_length(static_cast<std::ptrdiff_t>(k));
  const double limit = 4.0 * s.diameter();
  for (;;) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t e : index.edges_near(a - Complex(radius, radius), a + Complex(radius, radius))) {
      if (e == k || e == prev) continue;
      const Point p = s.vertices()[e], q = s.vertices()[(e + 1) % n];
      // Solve a + t dir = p + u (q - p).
      const Complex pq = q - p;
      const double den = cross(dir, pq);
      if (den == 0.0) continue;
      const double t = cross(p - a, pq) / den;
      const double u = cross(p - a, dir) / den;
      if (t > 0.0 && u >= 0.0 && u <= 1.0) best = std::min(best, t);
    }
    if (best <= radius || radius > limit) return best;
    radius *= 2.0;
  }
}

void check_eps(const Polygon& s, double eps) {
  require(eps > 0.0, ErrorKind::kPrecondition, "offset parameter must be positive");
  const double e0 = epsilon0(s);
  require(eps < e0, ErrorKind::kPrecondition,
          "offset parameter " + std::to_string(eps) + " is not below epsilon0 = " + std::to_string(e0));
}

std::vector<Quadrilateral> cover_unchecked(const Polygon& s, double eps) {
  const std::size_t n = s.size();
  std::vector<CornerOffset> off(n);
  for (std::size_t k = 0; k < n; ++k) off[k] = offsets_unchecked(s, k, eps);
  std::vector<Quadrilateral> quads(n);
  for (std::size_t k = 0; k < n; ++k) {
    const CornerOffset& a = off[k];
    const CornerOffset& b = off[(k + 1) % n];
    quads[k].v = {a.outer, b.outer, b.inner, a.inner};
  }
  return quads;
}

// Separating-axis test on the edge normals of two convex quadrilaterals.
bool interiors_overlap(const Quadrilateral& p, const Quadrilateral& q, double tol) {
  for (const Quadrilateral* poly : {&p, &q}) {
    for (std::size_t i = 0; i < 4; ++i) {
      const Complex e = poly->v[(i + 1) % 4] - poly->v[i];
      const double len = std::abs(e);
      if (len == 0.0) continue;
      const Complex normal = Complex(e.imag(), -e.real()) / len;
      double p_lo = std::numeric_limits<double>::max(), p_hi = -p_lo, q_lo = p_lo, q_hi = -p_lo;
      for (const Point& x : p.v) {
        p_lo = std::min(p_lo, dot(x, normal));
        p_hi = std::max(p_hi, dot(x, normal));
      }
      for (const Point& x : q.v) {
        q_lo = std::min(q_lo, dot(x, normal));
        q_hi = std::max(q_hi, dot(x, normal));
      }
      if (std::min(p_hi, q_hi) - std::max(p_lo, q_lo) <= tol) return false;
    }
  }
  return true;
}

Polygon polygon_or_hypothesis_error(std::vector<Point> v, int level, const char* which) {
  try {
    Polygon p(std::move(v), level);
    if (auto hit = find_self_intersection(p))
      fail(ErrorKind::kHypothesis, std::string("(G2) violated: ") + which + " polygon self-intersects at edges " +
                                       std::to_string(hit->first) + " and " + std::to_string(hit->second));
    return p;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kHypothesis) throw;
    fail(ErrorKind::kHypothesis, std::string("(G2) violated: ") + which + " polygon degenerates: " + e.what());
  }
}

double raw_signed_area(const std::vector<Point>& v) {
  double twice = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) twice += cross(v[k], v[(k + 1) % v.size()]);
  return 0.5 * twice;
}

}  // namespace

bool Quadrilateral::is_convex(double tol) const {
  for (std::size_t i = 0; i < 4; ++i) {
    const Complex e0 = v[(i + 1) % 4] - v[i], e1 = v[(i + 2) % 4] - v[(i + 1) % 4];
    if (cross(e0, e1) < -tol * std::abs(e0) * std::abs(e1)) return false;
  }
  return true;
}

CornerOffset corner_offset_points(const Polygon& s, std::size_t k, double eps) {
  require(k < s.size(), ErrorKind::kPrecondition, "vertex index out of range");
  check_eps(s, eps);
  return offsets_unchecked(s, k, eps);
}

double epsilon0(const Polygon& s) {
  const EdgeIndex index(s);
  double e0 = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < s.size(); ++k) {
    const Complex d = inner_bisector(s, k);
    const double reach = std::min(first_hit(s, index, k, d), first_hit(s, index, k, -d));
    e0 = std::min(e0, reach * std::sin(0.5 * s.interior_angle(static_cast<std::ptrdiff_t>(k))));
  }
  return e0;
}

std::vector<Quadrilateral> quadrilateral_cover(const Polygon& s, double eps) {
  check_eps(s, eps);
  return cover_unchecked(s, eps);
}

std::optional<std::pair<std::size_t, std::size_t>> find_overlapping_quadrilaterals(
    const std::vector<Quadrilateral>& quads, double tol) {
  if (quads.empty()) return std::nullopt;
  for (std::size_t k = 0; k < quads.size(); ++k)
    if (!quads[k].is_convex(1e-12)) return std::make_pair(k, k);

  // Bucket bounding boxes on a uniform grid sized to the typical tile.
  struct Box {
    double lo_x, lo_y, hi_x, hi_y;
  };
  std::vector<Box> boxes(quads.size());
  Box all{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
          -std::numeric_limits<double>::max(), -std::numeric_limits<double>::max()};
  double size_sum = 0.0;
  for (std::size_t k = 0; k < quads.size(); ++k) {
    Box b{quads[k].v[0].real(), quads[k].v[0].imag(), quads[k].v[0].real(), quads[k].v[0].imag()};
    for (const Point& p : quads[k].v) {
      b.lo_x = std::min(b.lo_x, p.real());
      b.lo_y = std::min(b.lo_y, p.imag());
      b.hi_x = std::max(b.hi_x, p.real());
      b.hi_y = std::max(b.hi_y, p.imag());
    }
    boxes[k] = b;
    size_sum += std::max(b.hi_x - b.lo_x, b.hi_y - b.lo_y);
    all.lo_x = std::min(all.lo_x, b.lo_x);
    all.lo_y = std::min(all.lo_y, b.lo_y);
    all.hi_x = std::max(all.hi_x, b.hi_x);
    all.hi_y = std::max(all.hi_y, b.hi_y);
  }
  const double cell = std::max(size_sum / static_cast<double>(quads.size()), 1e-300);
  const int nx = std::max(1, static_cast<int>(std::ceil((all.hi_x - all.lo_x) / cell)) + 1);
  const int ny = std::max(1, static_cast<int>(std::ceil((all.hi_y - all.lo_y) / cell)) + 1);
  std::vector<std::vector<std::size_t>> grid(static_cast<std::size_t>(nx) * ny);
  auto cell_range = [&](const Box& b) {
    const int i0 = std::clamp(static_cast<int>((b.lo_x - all.lo_x) / cell), 0, nx - 1);
    const int i1 = std::clamp(static_cast<int>((b.hi_x - all.lo_x) / cell), 0, nx - 1);
    const int j0 = std::clamp(static_cast<int>((b.lo_y - all.lo_y) / cell), 0, ny - 1);
    const int j1 = std::clamp(static_cast<int>((b.hi_y - all.lo_y) / cell), 0, ny - 1);
    return std::array<int, 4>{i0, i1, j0, j1};
  };
  for (std::size_t k = 0; k < quads.size(); ++k) {
    const auto r = cell_range(boxes[k]);
    for (int j = r[2]; j <= r[3]; ++j)
      for (int i = r[0]; i <= r[1]; ++i) grid[static_cast<std::size_t>(j) * nx + i].push_back(k);
  }
  for (const auto& bucket : grid)
    for (std::size_t a = 0; a < bucket.size(); ++a)
      for (std::size_t b = a + 1; b < bucket.size(); ++b) {
        const std::size_t p = std::min(bucket[a], bucket[b]), q = std::max(bucket[a], bucket[b]);
        if (interiors_overlap(quads[p], quads[q], tol)) return std::make_pair(p, q);
      }
  return std::nullopt;
}

InterpolationPair inner_outer_interpolants(const Polygon& sigma, double delta) {
  require(sigma.side_length().has_value(), ErrorKind::kPrecondition, "polygon sides must have equal length");
  require(delta > 0.0, ErrorKind::kPrecondition, "delta must be positive");
  const double eps = delta * *sigma.side_length();
  const std::vector<Quadrilateral> quads = cover_unchecked(sigma, eps);
  if (auto hit = find_overlapping_quadrilaterals(quads, sigma.tolerance()))
    fail(ErrorKind::kHypothesis, "(G1) violated: cover tiles " + std::to_string(hit->first) + " and " +
                                     std::to_string(hit->second) + " overlap at delta " + std::to_string(delta));
  std::vector<Point> inner(sigma.size()), outer(sigma.size());
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    inner[k] = quads[k].v[3];
    outer[k] = quads[k].v[0];
  }
  if (raw_signed_area(inner) <= 0.0) fail(ErrorKind::kHypothesis, "(G2) violated: inner polygon turned inside out");
  InterpolationPair pair{polygon_or_hypothesis_error(std::move(inner), sigma.level(), "inner"),
                         polygon_or_hypothesis_error(std::move(outer), sigma.level(), "outer"), sigma.level(),
                         delta};
  check_eps(sigma, eps);
  return pair;
}

Polygon koch_general_outer(const Polygon& inner, double alpha) {
  const double height = 0.5 * std::tan(0.5 * alpha);
  std::vector<Point> v;
  v.reserve(2 * inner.size());
  for (std::size_t k = 0; k < inner.size(); ++k) {
    const Point a = inner.vertices()[k];
    const Point b = inner.vertex(static_cast<std::ptrdiff_t>(k) + 1);
    v.push_back(a);
    // Outward normal of a counterclockwise edge is the edge turned clockwise.
    v.push_back(0.5 * (a + b) + height * (b - a) * Complex(0.0, -1.0));
  }
  return Polygon(std::move(v), inner.level());
}

InterpolationPair family_pair(const FractalFamily& family, int j, double delta) {
  switch (family.kind) {
    case FamilyKind::kKoch:
      return koch_pair(j);
    case FamilyKind::kKochGeneral: {
      Polygon inner = lsystem_boundary(family, j);
      Polygon outer = koch_general_outer(inner, family.turn_angle);
      return {std::move(inner), std::move(outer), j, 0.0};
    }
    case FamilyKind::kQuadric:
    case FamilyKind::kGosper:
      return inner_outer_interpolants(lsystem_boundary(family, j), delta);
    case FamilyKind::kCesaro:
      break;
  }
  fail(ErrorKind::kUnsupported, "unsupported family '" + family.name + "' for interpolant construction");
}

bool HypothesisGReport::g1() const {
  return std::all_of(levels.begin(), levels.end(), [](const auto& l) { return l.g1; });
}
bool HypothesisGReport::g2() const {
  return std::all_of(levels.begin(), levels.end(), [](const auto& l) { return l.g2; });
}
bool HypothesisGReport::g3() const {
  return std::all_of(levels.begin(), levels.end(), [](const auto& l) { return l.g3.value_or(true); });
}
bool HypothesisGReport::g4() const {
  return std::all_of(levels.begin(), levels.end(), [](const auto& l) { return l.g4; });
}
bool HypothesisGReport::all_pass() const { return g1() && g2() && g3() && g4(); }

HypothesisGReport verify_hypothesis_g(const FractalFamily& family, double delta, const std::vector<int>& levels) {
  HypothesisGReport report;
  report.family = family.name;
  report.delta = delta;
  std::vector<std::optional<InterpolationPair>> pairs;
  for (int j : levels) {
    HypothesisGLevel entry;
    entry.level = j;
    std::optional<InterpolationPair> pair;
    try {
      const Polygon sigma = lsystem_boundary(family, j);
      require(sigma.side_length().has_value(), ErrorKind::kPrecondition, "polygon sides must have equal length");
      const double eps = delta * *sigma.side_length();
      const auto quads = cover_unchecked(sigma, eps);
      entry.g1 = !find_overlapping_quadrilaterals(quads, sigma.tolerance()).has_value();
      if (!entry.g1) entry.note = "cover tiles overlap";
      std::vector<Point> inner(sigma.size()), outer(sigma.size());
      for (std::size_t k = 0; k < sigma.size(); ++k) {
        inner[k] = quads[k].v[3];
        outer[k] = quads[k].v[0];
      }
      try {
        const bool inner_positive = raw_signed_area(inner) > 0.0;
        Polygon pi = polygon_or_hypothesis_error(std::move(inner), j, "inner");
        Polygon po = polygon_or_hypothesis_error(std::move(outer), j, "outer");
        entry.g2 = inner_positive;
        if (entry.g2) pair = InterpolationPair{std::move(pi), std::move(po), j, delta};
      } catch (const Error& e) {
        if (entry.note.empty()) entry.note = e.what();
      }
      if (eps >= epsilon0(sigma)) entry.note += (entry.note.empty() ? "" : "; ") + std::string("offset exceeds epsilon0");
    } catch (const Error& e) {
      entry.note = e.what();
    }
    entry.g4 = pair.has_value() && locate(pair->inner, 0.0, 0.0) == Location::kInside;
    report.levels.push_back(entry);
    pairs.push_back(std::move(pair));
  }
  for (std::size_t i = 0; i + 1 < pairs.size(); ++i) {
    if (!pairs[i] || !pairs[i + 1]) {
      report.levels[i].g3 = false;
      continue;
    }
    const double tol = pairs[i]->outer.tolerance();
    const bool inner_ok = contains(pairs[i + 1]->inner, pairs[i]->inner, tol);
    const bool outer_ok = contains(pairs[i]->outer, pairs[i + 1]->outer, tol);
    report.levels[i].g3 = inner_ok && outer_ok;
    if (!inner_ok) report.levels[i].note += (report.levels[i].note.empty() ? "" : "; ") + std::string("T_j not inside next T");
    if (!outer_ok) report.levels[i].note += (report.levels[i].note.empty() ? "" : "; ") + std::string("next H not inside H_j");
  }
  return report;
}

}  // namespace fracspec::geometry
