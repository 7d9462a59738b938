#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "fracspec/conformal/composite.hpp"
#include "fracspec/conformal/schwarz_christoffel.hpp"
#include "fracspec/error.hpp"
#include "fracspec/geometry/koch.hpp"
#include "fracspec/quadrature.hpp"
#include "fracspec/spectral/bessel.hpp"
#include "oracles.hpp"

using namespace fracspec;
using namespace fracspec::conformal;
using geometry::Polygon;

namespace {

PrevertexSolution solve_koch(bool outer, int j) {
  const Polygon p = outer ? geometry::koch_outer(j) : geometry::koch_inner(j);
  return solve_parameter_problem(p, symmetric_fixed_prevertices(p, outer ? 6 : 3));
}

// Maps are reused across tests; solving H_2 takes a moment.
const PrevertexSolution& koch_map(bool outer, int j) {
  static std::map<std::pair<bool, int>, PrevertexSolution> cache;
  auto it = cache.find({outer, j});
  if (it == cache.end()) it = cache.emplace(std::make_pair(outer, j), solve_koch(outer, j)).first;
  return it->second;
}

const Polygon unit_square({{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}});

}  // namespace

TEST(GaussJacobi, MomentsMatchBetaFunction) {
  for (double a : {0.0, -0.5, 1.0, -2.0 / 3.0})
    for (double b : {0.0, 1.0 / 3.0, -0.25}) {
      const Rule1d& r = gauss_jacobi(12, a, b);
      for (int k = 0; k < 24; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(1.0 + r.nodes[i], k);
        const double exact = std::pow(2.0, a + b + k + 1) * std::beta(a + 1, b + k + 1);
        EXPECT_NEAR(s / exact, 1.0, 1e-12) << "a=" << a << " b=" << b << " k=" << k;
      }
    }
}

TEST(GaussJacobi, NodesAreInsideAndSorted) {
  const Rule1d& r = gauss_jacobi(30, -0.5, 0.25);
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    EXPECT_GT(r.nodes[i], -1.0);
    EXPECT_LT(r.nodes[i], 1.0);
    EXPECT_GT(r.weights[i], 0.0);
    if (i) EXPECT_LT(r.nodes[i - 1], r.nodes[i]);
  }
}

TEST(Bessel, SeriesMatchesIntegralRepresentation) {
  EXPECT_EQ(spectral::bessel_j(0, 0.0), 1.0);
  EXPECT_EQ(spectral::bessel_j(1, 0.0), 0.0);
  for (int n = 0; n <= 4; ++n)
    for (double x = 0.25; x <= 30.0; x += 1.37)
      EXPECT_NEAR(spectral::bessel_j(n, x), oracle::bessel_integral(n, x), 1e-13) << "n=" << n << " x=" << x;
}

TEST(Bessel, HalfIntegerOrderIsElementary) {
  for (double x = 0.1; x < 30.0; x += 0.9) {
    EXPECT_NEAR(spectral::bessel_j(0.5, x), std::sqrt(2.0 / (M_PI * x)) * std::sin(x), 1e-13);
    EXPECT_NEAR(spectral::bessel_j(1.5, x), std::sqrt(2.0 / (M_PI * x)) * (std::sin(x) / x - std::cos(x)), 1e-13);
  }
}

TEST(Bessel, OutOfRangeIsRejected) {
  EXPECT_THROW(spectral::bessel_j(0, 31.0), Error);
  EXPECT_THROW(spectral::bessel_j(-1.0, 1.0), Error);
}

TEST(Bessel, DiskConstants) {
  const auto& c = spectral::disk_constants();
  const double j01 = oracle::bisect([](double x) { return oracle::bessel_integral(0, x); }, 2.0, 3.0);
  const double j11 = oracle::bisect([](double x) { return oracle::bessel_integral(1, x); }, 3.5, 4.5);
  EXPECT_NEAR(j01, 2.404825557695773, 1e-12);
  EXPECT_NEAR(std::abs(spectral::bessel_j(0, 2.404825557695773)), 0.0, 1e-12);
  EXPECT_NEAR(c.j01_sq, 5.783185962947, 1e-9);
  EXPECT_NEAR(c.j01_sq, j01 * j01, 1e-10);
  EXPECT_NEAR(c.j11_sq, j11 * j11, 1e-10);
  EXPECT_GT(c.j11_sq, 14.68);
  EXPECT_NEAR(c.j01_sq, 5.784, 1e-3);
}

TEST(SchwarzChristoffel, ExponentsSumToMinusTwo) {
  for (int j = 0; j <= 2; ++j)
    for (bool outer : {false, true}) {
      const PrevertexSolution& s = koch_map(outer, j);
      double sum = 0.0;
      for (double e : s.exponents) sum += e;
      EXPECT_NEAR(sum, -2.0, 1e-12);
    }
}

TEST(SchwarzChristoffel, TriangleHasNoFreePrevertices) {
  const PrevertexSolution& s = koch_map(false, 0);
  EXPECT_LT(s.residual, 1e-10);
  const auto xi = s.prevertices();
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_NEAR(std::abs(xi[k] - s.vertices[k] / std::abs(s.vertices[k])), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(sc_evaluate(s, xi[k]) - s.vertices[k]), 0.0, 1e-10);
  }
}

// The square map is g(xi) = C int_0^xi (1 + zeta^4)^{-1/2}, and a vertex at
// distance sqrt(2)/2 fixes |C| through B(1/4, 1/2) / 4.
TEST(SchwarzChristoffel, SquareScaleMatchesClosedForm) {
  const PrevertexSolution s = solve_parameter_problem(unit_square, symmetric_fixed_prevertices(unit_square, 4));
  const double k = std::beta(0.25, 0.5) / 4.0;
  EXPECT_NEAR(std::abs(s.C), std::sqrt(0.5) / k, 1e-11);
  EXPECT_NEAR(std::abs(sc_evaluate(s, 0.0)), 0.0, 1e-13);
}

TEST(SchwarzChristoffel, LevelOneSideLengthsByIndependentQuadrature) {
  const PrevertexSolution& s = koch_map(false, 1);
  EXPECT_EQ(s.sector_size(), 4u);
  EXPECT_LT(s.residual, 1e-10);
  const std::vector<double> sides = side_lengths(s, 60);
  ASSERT_EQ(sides.size(), 12u);
  for (double l : sides) EXPECT_NEAR(l / (1.0 / std::sqrt(3.0)), 1.0, 1e-10);
  for (std::size_t k = 0; k < s.size(); ++k)
    EXPECT_NEAR(std::abs(sc_evaluate(s, s.prevertex(k)) - s.vertices[k]), 0.0, 1e-10);
}

TEST(SchwarzChristoffel, HexagonLevelTwoIsSixFoldSymmetric) {
  const PrevertexSolution& s = koch_map(true, 2);
  ASSERT_EQ(s.size(), 96u);
  EXPECT_LT(s.residual, 1e-10);
  const Complex rot = std::polar(1.0, M_PI / 3.0);
  for (std::size_t k = 0; k < 80; ++k) EXPECT_NEAR(std::abs(s.prevertex(k + 16) - rot * s.prevertex(k)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(sc_evaluate(s, 0.0)), 0.0, 1e-12);
}

TEST(SchwarzChristoffel, PathIndependence) {
  const PrevertexSolution& s = koch_map(false, 0);
  const Complex direct = sc_evaluate(s, 0.5);
  const Complex detour = s.A + s.C * (sc_segment_integral(s, 0.0, Complex(0.0, 0.5)) +
                                      sc_segment_integral(s, Complex(0.0, 0.5), Complex(0.5, 0.0)));
  EXPECT_NEAR(std::abs(direct - detour), 0.0, 1e-10);
  std::vector<oracle::Pt> v(s.vertices.begin(), s.vertices.end());
  EXPECT_TRUE(oracle::inside(v, direct));
}

TEST(SchwarzChristoffel, JsonRoundTrip) {
  const PrevertexSolution& s = koch_map(false, 1);
  const PrevertexSolution back = map_from_json(map_to_json(s));
  EXPECT_EQ(back.gaps, s.gaps);
  EXPECT_EQ(back.theta0, s.theta0);
  EXPECT_EQ(back.C, s.C);
  EXPECT_EQ(back.A, s.A);
  EXPECT_EQ(back.vertices, s.vertices);
}

TEST(InverseMap, RoundTripOnInteriorPoints) {
  const PrevertexSolution& s = koch_map(false, 1);
  const InverseMap inv(s);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<oracle::Pt> v(s.vertices.begin(), s.vertices.end());
  int tried = 0;
  while (tried < 200) {
    const Point z(u(rng), u(rng));
    if (!oracle::inside(v, z)) continue;
    ++tried;
    const DiskPoint p = inv(z);
    EXPECT_LT(std::abs(p.xi()), 1.0);
    EXPECT_NEAR(std::abs(sc_evaluate(s, p.xi()) - z), 0.0, 1e-9);
  }
}

TEST(InverseMap, VerticesAndCentre) {
  const PrevertexSolution& s = koch_map(false, 1);
  const InverseMap inv(s);
  EXPECT_NEAR(std::abs(inv(0.0).xi()), 0.0, 1e-12);
  for (std::size_t k = 0; k < s.size(); ++k)
    EXPECT_NEAR(std::abs(inverse_disk_map(inv, s.vertices[k]).xi() - s.prevertex(k)), 0.0, 1e-8);
  EXPECT_THROW(inverse_disk_map(inv, Point(2.0, 0.0)), Error);
}

TEST(CompositeMap, LevelZeroIsIdentity) {
  const CompositeMap f(koch_map(false, 0), koch_map(false, 0));
  EXPECT_TRUE(f.is_identity());
  // Points of the inscribed disk, radius 1/2.
  for (double r = 0.0; r < 0.5; r += 0.07)
    for (int k = 0; k < 12; ++k) EXPECT_NEAR(composite_derivative_abs(f, std::polar(r, k * M_PI / 6)), 1.0, 1e-12);
}

TEST(CompositeMap, FixedVerticesStayPut) {
  for (bool outer : {false, true})
    for (int j = 1; j <= 2; ++j) {
      const CompositeMap f(koch_map(outer, 0), koch_map(outer, j));
      for (const Point& z : f.base_polygon().vertices()) EXPECT_NEAR(std::abs(f.evaluate(z) - z), 0.0, 1e-8);
    }
}

TEST(CompositeMap, CornerSlopeMatchesAngle) {
  const CompositeMap f(koch_map(false, 0), koch_map(false, 1));
  ASSERT_EQ(f.singular_points().size(), 9u);
  int thirds = 0, four_thirds = 0;
  for (std::size_t i = 0; i < f.singular_points().size(); ++i) {
    const SingularPoint& s = f.singular_points()[i];
    const Point a = f.base_polygon().vertex(s.base_edge), b = f.base_polygon().vertex(s.base_edge + 1);
    const Complex inward = Complex(0.0, 1.0) * (b - a) / std::abs(b - a);
    const double r1 = 1e-5, r2 = 1e-8;
    const double slope = std::log(f.derivative_abs_near(i, r1 * inward) / f.derivative_abs_near(i, r2 * inward)) /
                         std::log(r1 / r2);
    EXPECT_NEAR(slope, s.exponent, 0.01);
    if (std::abs(s.exponent + 2.0 / 3.0) < 1e-12) ++thirds;
    if (std::abs(s.exponent - 1.0 / 3.0) < 1e-12) ++four_thirds;
  }
  EXPECT_EQ(thirds, 3);
  EXPECT_EQ(four_thirds, 6);
}

TEST(CompositeMap, NearEvaluationAgreesWithDirect) {
  const CompositeMap f(koch_map(true, 0), koch_map(true, 1));
  for (std::size_t i = 0; i < f.singular_points().size(); i += 3) {
    const SingularPoint& s = f.singular_points()[i];
    const Point a = f.base_polygon().vertex(s.base_edge), b = f.base_polygon().vertex(s.base_edge + 1);
    const Complex dz = 0.01 * Complex(0.0, 1.0) * (b - a) / std::abs(b - a);
    EXPECT_NEAR(f.derivative_abs_near(i, dz) / f.derivative_abs(s.z + dz), 1.0, 1e-9);
  }
}

TEST(Singularity, KochExponents) {
  const Polygon t0 = geometry::koch_inner(0), t1 = geometry::koch_inner(1);
  const SingularityReport r = singularity_exponents(t0, t1, {{0, 0}, {1, 4}, {2, 8}});
  EXPECT_TRUE(r.assumption_b);
  for (const SingularityExponent& e : r.exponents) {
    if (e.vertex_index % 4 == 0) {
      EXPECT_NEAR(e.map_exponent(), 1.0, 1e-12);
    } else {
      EXPECT_NEAR(e.map_exponent(), e.alpha, 1e-12);
      EXPECT_TRUE(std::abs(e.alpha - 1.0 / 3.0) < 1e-12 || std::abs(e.alpha - 4.0 / 3.0) < 1e-12);
    }
  }
}

TEST(Singularity, AssumptionBFailsForLargeAngleJump) {
  const Polygon reflex({{0, 0}, {2, 0}, {2, 2}, {1, 2}, {1, 1}, {0, 1}});
  // Vertex 4 is reflex (3/2); sending a right angle there breaks the assumption.
  const SingularityReport r = singularity_exponents(unit_square, reflex, {{0, 4}});
  EXPECT_FALSE(r.assumption_b);
}

TEST(Singularity, TransplantedEigenfunctionPowers) {
  const auto t = transplanted_singularity_table(KochFamily::kT);
  EXPECT_DOUBLE_EQ(t[0].leading_power, 3.0);
  EXPECT_DOUBLE_EQ(t[2].alpha, 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(t[2].leading_power, 1.0);
  const auto h = transplanted_singularity_table(KochFamily::kH);
  EXPECT_DOUBLE_EQ(h[0].leading_power, 1.5);
}
