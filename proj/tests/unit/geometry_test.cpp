#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "fracspec/error.hpp"
#include "fracspec/geometry/gap_bounds.hpp"
#include "fracspec/geometry/interpolants.hpp"
#include "fracspec/geometry/io.hpp"
#include "fracspec/geometry/koch.hpp"
#include "fracspec/geometry/lsystem.hpp"
#include "fracspec/spectral/bessel.hpp"
#include "oracles.hpp"

using namespace fracspec;
using namespace fracspec::geometry;

namespace {

std::map<long, int> angle_census(const Polygon& p) {
  std::map<long, int> census;  // keyed by 3 alpha
  for (double a : p.angle_fractions()) ++census[std::lround(3 * a)];
  return census;
}

}  // namespace

TEST(Koch, InnerVertexCountsAndAngles) {
  for (int j = 0; j <= 4; ++j) {
    const Polygon t = koch_inner(j);
    const int n = 3 * static_cast<int>(std::pow(4, j));
    const int extra = static_cast<int>(std::pow(4, j)) - 1;
    ASSERT_EQ(static_cast<int>(t.size()), n);
    auto c = angle_census(t);
    EXPECT_EQ(c[1], 3 + extra) << "j=" << j;
    EXPECT_EQ(c[4], 2 * extra) << "j=" << j;
  }
}

TEST(Koch, OuterVertexCountsAndAngles) {
  for (int j = 0; j <= 4; ++j) {
    const Polygon h = koch_outer(j);
    const int extra = static_cast<int>(std::pow(4, j)) - 1;
    ASSERT_EQ(static_cast<int>(h.size()), 6 * static_cast<int>(std::pow(4, j)));
    auto c = angle_census(h);
    EXPECT_EQ(c[2], 6 + 4 * extra) << "j=" << j;
    EXPECT_EQ(c[5], 2 * extra) << "j=" << j;
  }
}

TEST(Koch, ClosureIdentity) {
  for (int j = 0; j <= 3; ++j)
    for (const Polygon& p : {koch_inner(j), koch_outer(j)}) {
      double s = 0.0;
      for (double a : p.angle_fractions()) s += 1.0 - a;
      EXPECT_NEAR(s, 2.0, 1e-12);
    }
}

TEST(Koch, SideLengthsShrinkByThree) {
  const Polygon t2 = koch_inner(2);
  ASSERT_TRUE(t2.side_length().has_value());
  EXPECT_NEAR(*t2.side_length(), std::sqrt(3.0) / 9.0, 1e-14);
  for (std::size_t k = 0; k < t2.size(); ++k)
    EXPECT_NEAR(std::abs(t2.vertex(k + 1) - t2.vertex(k)), std::sqrt(3.0) / 9.0, 1e-13);
}

TEST(Koch, BaseShapes) {
  const Polygon t0 = koch_inner(0);
  for (const Point& v : t0.vertices()) EXPECT_NEAR(std::abs(v), 1.0, 1e-15);
  EXPECT_NEAR(t0.vertex(0).imag(), 1.0, 1e-15);
  const Polygon h0 = koch_outer(0);
  for (const Point& v : h0.vertices()) EXPECT_NEAR(std::abs(v), 1.0, 1e-15);
  for (const Point& v : t0.vertices()) {
    const bool is_hex_vertex = std::any_of(h0.vertices().begin(), h0.vertices().end(),
                                           [&](const Point& w) { return std::abs(w - v) < 1e-14; });
    EXPECT_TRUE(is_hex_vertex);
  }
}

// The snowflake area series: each level adds 3 * 4^{j-1} triangles of
// side sqrt(3)/3^j.
TEST(Koch, AreaMatchesGeometricSeries) {
  const double a0 = 3.0 * std::sqrt(3.0) / 4.0;
  for (int j = 0; j <= 4; ++j) {
    const double expected = a0 * (1.0 + 0.6 * (1.0 - std::pow(4.0 / 9.0, j)));
    const Polygon t = koch_inner(j);
    EXPECT_NEAR(oracle::shoelace_area(t.vertices()), expected, 1e-13);
    EXPECT_NEAR(t.area(), expected, 1e-13);
  }
}

TEST(Koch, OuterIsInnerPlusIsoscelesBumps) {
  // H_1 = T_1 plus a triangle of height edge / (2 sqrt 3) on each T_1 edge.
  const Polygon t1 = koch_inner(1), h1 = koch_outer(1);
  const double edge = *t1.side_length();
  const double bump = 0.5 * edge * edge / (2.0 * std::sqrt(3.0));
  EXPECT_NEAR(h1.area(), t1.area() + 12 * bump, 1e-13);
}

TEST(Koch, NestingChains) {
  for (int j = 0; j <= 1; ++j) {
    const KochNestingReport r = verify_koch_nesting(koch_pair(j), koch_pair(j + 1));
    EXPECT_TRUE(r.inclusions_hold()) << "j=" << j;
    EXPECT_TRUE(r.collar_holds) << "j=" << j;
    EXPECT_GT(r.collar_samples, 50u);
  }
}

// The nominal collar width 1/3^{j+1} is too generous: a T_j edge midpoint
// sits l_j / 4 deep inside H_j yet lies on the boundary of T_j.
TEST(Koch, NominalCollarWidthFails) {
  const KochNestingReport r = verify_koch_nesting(koch_pair(0), koch_pair(1));
  EXPECT_FALSE(r.nominal_collar_holds);
  EXPECT_NEAR(r.collar_width, std::sqrt(3.0) / 4.0, 1e-14);
}

TEST(Koch, PerturbedVertexBreaksInclusion) {
  const Polygon t1 = koch_inner(1), h1 = koch_outer(1);
  std::vector<Point> v = t1.vertices();
  v[1] += 0.2 * v[1] / std::abs(v[1]);
  const Polygon moved(v, 1);
  EXPECT_TRUE(contains(h1, t1, 1e-12));
  EXPECT_FALSE(contains(h1, moved, 1e-12));
  std::vector<oracle::Pt> hv(h1.vertices().begin(), h1.vertices().end());
  EXPECT_FALSE(oracle::inside(hv, v[1]));
}

TEST(Koch, LevelGuard) {
  EXPECT_THROW(koch_inner(kMaxKochLevel + 1), Error);
  EXPECT_THROW(koch_inner(-1), Error);
}

TEST(Polygon, LocateAgreesWithWindingNumber) {
  const Polygon h2 = koch_outer(2);
  std::vector<oracle::Pt> v(h2.vertices().begin(), h2.vertices().end());
  const EdgeIndex index(h2);
  int checked = 0;
  for (int i = 0; i < 60; ++i)
    for (int k = 0; k < 60; ++k) {
      const Point p(-1.1 + 2.2 * (i + 0.37) / 60, -1.1 + 2.2 * (k + 0.61) / 60);
      if (index.distance_to_boundary(p) < 1e-6) continue;
      EXPECT_EQ(index.locate(p, h2.tolerance()) == Location::kInside, oracle::inside(v, p));
      ++checked;
    }
  EXPECT_GT(checked, 3000);
}

TEST(Polygon, ClockwiseInputIsReversed) {
  const Polygon p({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  EXPECT_GT(p.area(), 0.0);
  EXPECT_EQ(p.vertex(0), Point(0, 0));
}

TEST(Polygon, SelfIntersectionDetected) {
  const Polygon bow({{0, 0}, {1, 1}, {1, 0}, {0, 1}});
  EXPECT_FALSE(is_simple(bow));
  EXPECT_TRUE(is_simple(koch_inner(3)));
}

TEST(Polygon, JsonRoundTripIsExact) {
  const Polygon t2 = koch_inner(2);
  const Polygon back = polygon_from_json(polygon_to_json(t2));
  EXPECT_EQ(back.vertices(), t2.vertices());
  EXPECT_EQ(back.level(), 2);
}

TEST(Lsystem, QuadricAndGosperSideLengths) {
  const FractalFamily q = quadric_family();
  const Polygon q0 = lsystem_boundary(q, 0), q1 = lsystem_boundary(q, 1);
  EXPECT_EQ(q0.size(), 4u);
  EXPECT_NEAR(*q0.side_length(), 1.0, 1e-14);
  EXPECT_NEAR(*q1.side_length(), 0.25, 1e-14);
  const double largest = *std::max_element(q1.angle_fractions().begin(), q1.angle_fractions().end());
  EXPECT_NEAR(largest, 1.5, 1e-12);
  // Each replacement adds and removes the same area.
  EXPECT_NEAR(q1.area(), 1.0, 1e-13);

  const Polygon g2 = lsystem_boundary(gosper_family(), 2);
  EXPECT_NEAR(*g2.side_length(), 0.2, 1e-13);
  EXPECT_TRUE(is_simple(g2));
}

TEST(Lsystem, KochFamilyMatchesBespokeConstruction) {
  const Polygon a = lsystem_boundary(koch_family(), 2), b = koch_inner(2);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_NEAR(a.area(), b.area(), 1e-12);
}

TEST(Interpolants, CornerOffsets) {
  const Polygon square({{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}});
  const CornerOffset c = corner_offset_points(square, 0, 0.1);
  EXPECT_NEAR(std::abs(c.inner - square.vertex(0)), 0.1 * std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(std::abs(c.outer - square.vertex(0)), 0.1 * std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(std::abs(0.5 * (c.inner + c.outer) - square.vertex(0)), 0.0, 1e-15);
  EXPECT_THROW(corner_offset_points(square, 0, 10.0), Error);

  // Straight vertex: the offset equals eps.
  const Polygon with_flat({{-0.5, -0.5}, {0.0, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}});
  const CornerOffset flat = corner_offset_points(with_flat, 1, 0.1);
  EXPECT_NEAR(std::abs(flat.inner - with_flat.vertex(1)), 0.1, 1e-14);
}

TEST(Interpolants, ReflexCornerInnerPointIsInside) {
  const Polygon q1 = lsystem_boundary(quadric_family(), 1);
  std::vector<oracle::Pt> v(q1.vertices().begin(), q1.vertices().end());
  for (std::size_t k = 0; k < q1.size(); ++k) {
    if (std::abs(q1.angle_fractions()[k] - 1.5) > 1e-9) continue;
    const CornerOffset c = corner_offset_points(q1, k, 0.05);
    EXPECT_TRUE(oracle::inside(v, c.inner));
    EXPECT_FALSE(oracle::inside(v, c.outer));
  }
}

TEST(Interpolants, SquareCoverIsFourDisjointTrapezoids) {
  const Polygon square({{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}});
  const auto quads = quadrilateral_cover(square, 0.1);
  ASSERT_EQ(quads.size(), 4u);
  for (const auto& q : quads) {
    std::vector<oracle::Pt> v(q.v.begin(), q.v.end());
    // Outer side 1.2, inner side 0.8, height 0.2.
    EXPECT_NEAR(oracle::shoelace_area(v), 0.2, 1e-14);
  }
  EXPECT_FALSE(find_overlapping_quadrilaterals(quads, 1e-12).has_value());
}

TEST(Interpolants, KochLevelOneCoverIsDisjoint) {
  const auto quads = quadrilateral_cover(koch_inner(1), 0.01);
  ASSERT_EQ(quads.size(), 12u);
  EXPECT_FALSE(find_overlapping_quadrilaterals(quads, 1e-12).has_value());
  // Cross-check with sampled interior points: none lies in two tiles.
  for (std::size_t a = 0; a < quads.size(); ++a) {
    const oracle::Pt centre = 0.25 * (quads[a].v[0] + quads[a].v[1] + quads[a].v[2] + quads[a].v[3]);
    for (std::size_t b = 0; b < quads.size(); ++b) {
      if (a == b) continue;
      std::vector<oracle::Pt> v(quads[b].v.begin(), quads[b].v.end());
      EXPECT_FALSE(oracle::inside(v, centre));
    }
  }
}

TEST(Interpolants, QuadricPairIsNested) {
  const Polygon s1 = lsystem_boundary(quadric_family(), 1);
  const InterpolationPair pair = inner_outer_interpolants(s1, 0.4);
  EXPECT_TRUE(contains(s1, pair.inner, 1e-12));
  EXPECT_TRUE(contains(pair.outer, s1, 1e-12));
  EXPECT_TRUE(is_simple(pair.inner));
  EXPECT_TRUE(is_simple(pair.outer));
}

TEST(Interpolants, QuadricDeltaAboveHalfViolatesG1) {
  const Polygon s1 = lsystem_boundary(quadric_family(), 1);
  try {
    inner_outer_interpolants(s1, 0.6);
    FAIL() << "expected a hypothesis error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kHypothesis);
    EXPECT_NE(std::string(e.what()).find("G1"), std::string::npos);
  }
}

TEST(Interpolants, SmallOffsetInnerAreaTendsToOne) {
  const Polygon square({{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}});
  const InterpolationPair pair = inner_outer_interpolants(square, 1e-4);
  EXPECT_NEAR(pair.inner.area(), 1.0, 1e-3);
  EXPECT_NEAR(pair.inner.area(), std::pow(1.0 - 2e-4, 2), 1e-12);
}

TEST(HypothesisG, QuadricRange) {
  const HypothesisGReport ok = verify_hypothesis_g(quadric_family(), 0.4, {1, 2, 3});
  EXPECT_TRUE(ok.all_pass());
  const HypothesisGReport bad = verify_hypothesis_g(quadric_family(), 0.3, {1, 2});
  EXPECT_TRUE(bad.g1());
  EXPECT_FALSE(bad.g3());
}

TEST(HypothesisG, GosperEvenLevels) {
  EXPECT_TRUE(verify_hypothesis_g(gosper_family(), 0.48, {2, 4}).all_pass());
  EXPECT_FALSE(verify_hypothesis_g(gosper_family(), 0.25, {2, 4}).all_pass());
}

TEST(GapBounds, PangConstantScalings) {
  const double lambda = spectral::disk_constants().j01_sq;
  EXPECT_NEAR(pang_constant(M_PI, 1.0), std::pow(2.0, 9) * std::pow(lambda, 4) / 3.0, 1e-9);
  EXPECT_NEAR(pang_constant(2.0, 1.0) / pang_constant(2.0, 2.0), 128.0, 1e-10);
  EXPECT_THROW(pang_constant(0.0, 1.0), Error);
  const double koch = std::pow(2.0, 9) * std::pow(lambda, 4) * std::pow(1.5 * std::sqrt(3.0), 2.25) /
                      (3.0 * std::pow(M_PI, 2.25));
  EXPECT_NEAR(koch_gap_bound(0).constant_C / koch, 1.0, 1e-14);
}

TEST(GapBounds, KochBound) {
  const double lambda = spectral::disk_constants().j01_sq;
  const double b0 = std::pow(lambda, 4) * std::pow(3.0, 0.75) / (std::pow(2.0, 1.25) * std::pow(M_PI, 2.25));
  EXPECT_NEAR(koch_gap_bound(0).bound, b0, 1e-12 * b0);
  for (int j = 0; j <= 6; ++j) {
    EXPECT_NEAR(koch_gap_bound(j + 2).bound, koch_gap_bound(j).bound / 3.0, 1e-13 * b0);
    EXPECT_LT(koch_gap_bound(j + 1).bound, koch_gap_bound(j).bound);
  }
}

TEST(GapBounds, GeneralBoundScaling) {
  const GapBound a = general_gap_bound(2.0, 0.4, 1.5 * M_PI, 1.0);
  const GapBound b = general_gap_bound(2.0, 0.4, 1.5 * M_PI, 0.25);
  EXPECT_NEAR(b.bound / a.bound, 0.5, 1e-15);
  EXPECT_NEAR(a.bound, 2.0 * std::sqrt(0.8) / std::sqrt(std::sin(0.75 * M_PI)), 1e-14);
  EXPECT_THROW(general_gap_bound(2.0, 0.4, 0.5 * M_PI, 1.0), Error);
}
