#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fracspec/error.hpp"
#include "fracspec/fem/assembly.hpp"
#include "fracspec/spectral/bessel.hpp"
#include "fracspec/spectral/enclosure.hpp"
#include "fracspec/spectral/local_modes.hpp"
#include "fracspec/spectral/oracle.hpp"
#include "fracspec/spectral/qep.hpp"
#include "oracles.hpp"

using namespace fracspec;
using namespace fracspec::spectral;

namespace {

SparseMatrix scalar(double x) {
  SparseMatrix a(1, 1);
  a.insert(0, 0) = x;
  return a;
}

SecondOrderSpectrum synthetic(std::initializer_list<Complex> points) {
  SecondOrderSpectrum s;
  for (Complex z : points) s.points.push_back({z, 0.0, 1.0});
  return s;
}

}  // namespace

TEST(Qep, ScalarPurelyImaginaryPair) {
  const SecondOrderSpectrum s = solve_qep(scalar(4), scalar(0), scalar(1));
  ASSERT_EQ(s.points.size(), 2u);
  std::vector<Complex> z{s.points[0].lambda, s.points[1].lambda};
  std::sort(z.begin(), z.end(), [](Complex a, Complex b) { return a.imag() < b.imag(); });
  EXPECT_NEAR(std::abs(z[0] - Complex(0, -2)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(z[1] - Complex(0, 2)), 0.0, 1e-14);
}

TEST(Qep, ScalarDoubleRoot) {
  const SecondOrderSpectrum s = solve_qep(scalar(4), scalar(2), scalar(1));
  ASSERT_EQ(s.points.size(), 2u);
  // A defective double root is only resolved to sqrt(eps).
  for (const auto& p : s.points) EXPECT_NEAR(std::abs(p.lambda - 2.0), 0.0, 1e-7);
  EXPECT_NEAR(std::abs(s.points[0].lambda + s.points[1].lambda - 4.0), 0.0, 1e-14);
}

// Q(z) = diag(k_i) - 2 z diag(l_i) + z^2 I decouples into scalar quadratics.
TEST(Qep, DiagonalPencilMatchesQuadraticFormula) {
  const int n = 6;
  SparseMatrix K(n, n), L(n, n), M(n, n);
  std::vector<Complex> expected;
  for (int i = 0; i < n; ++i) {
    const double k = 1.0 + i, l = 0.3 * i;
    K.insert(i, i) = k;
    L.insert(i, i) = l;
    M.insert(i, i) = 1.0;
    const Complex disc = std::sqrt(Complex(l * l - k));
    expected.push_back(l + disc);
    expected.push_back(l - disc);
  }
  const SecondOrderSpectrum s = solve_qep(K, L, M);
  ASSERT_EQ(s.points.size(), expected.size());
  for (Complex e : expected) {
    double best = 1e300;
    for (const auto& p : s.points) best = std::min(best, std::abs(p.lambda - e));
    EXPECT_LT(best, 1e-12);
  }
  for (const auto& p : s.points) EXPECT_TRUE(p.residual_ok());
}

// Dense and shift-invert routes must agree on the points near the shift.
TEST(Qep, ShiftInvertAgreesWithDense) {
  const fem::TriangleMesh mesh = fem::uniform_mesh(fem::BaseShape::kTriangle, 1);
  const fem::DofMap dofs(mesh, 3);
  const fem::QuadraticPencil pen = fem::assemble_pencil(mesh, dofs, fem::UnitWeight());
  const SecondOrderSpectrum dense = solve_qep(pen);
  const double sigma = ground_shift(pen);
  EXPECT_NEAR(sigma, 4.0 * M_PI / 3.0, 0.05);
  const SecondOrderSpectrum near = solve_qep_near(pen, sigma);
  ASSERT_FALSE(near.points.empty());
  for (const auto& p : near.points) {
    double best = 1e300;
    for (const auto& q : dense.points) best = std::min(best, std::abs(p.lambda - q.lambda));
    EXPECT_LT(best, 1e-8 * std::abs(p.lambda));
    EXPECT_TRUE(p.residual_ok());
  }
}

// Q(z) = diag((z - l_i)^2 + e_i^2) is semidefinite at real z; the double
// root l_2 = 3 makes Q(3) exactly singular.
TEST(Qep, ShiftOnTheSpectrumStillFindsThePoint) {
  const int n = 12;
  fem::QuadraticPencil pen;
  pen.K.resize(n, n);
  pen.L.resize(n, n);
  pen.M.resize(n, n);
  for (int i = 0; i < n; ++i) {
    const double l = 1.0 + i, e = i == 2 ? 0.0 : 0.5;
    pen.K.insert(i, i) = l * l + e * e;
    pen.L.insert(i, i) = l;
    pen.M.insert(i, i) = 1.0;
  }
  const SecondOrderSpectrum near = solve_qep_near(pen, 3.0);
  EXPECT_NE(near.linearization.find("sigma = 3.003"), std::string::npos) << near.linearization;
  double best = 1e300;
  for (const auto& p : near.points) best = std::min(best, std::abs(p.lambda - 3.0));
  // A defective double root is only resolved to about sqrt(eps).
  EXPECT_LT(best, 1e-6);
}

TEST(Qep, WeightFreeTriangleGroundPointIsNearExactValue) {
  const fem::TriangleMesh mesh = fem::uniform_mesh(fem::BaseShape::kTriangle, 2);
  const fem::DofMap dofs(mesh, 4);
  const fem::QuadraticPencil pen = fem::assemble_pencil(mesh, dofs, fem::UnitWeight());
  const SecondOrderSpectrum s = solve_qep_near(pen, ground_shift(pen));
  const GroundSelection g = select_ground_point(s, 0.0, 0.995 * std::sqrt(112.0 * M_PI * M_PI / 27.0));
  const Enclosure e = enclosure_from_point(g.lambda, 0.0, 0.995 * std::sqrt(112.0 * M_PI * M_PI / 27.0));
  EXPECT_LE(e.lower, 4.0 * M_PI / 3.0);
  EXPECT_GE(e.upper, 4.0 * M_PI / 3.0);
  EXPECT_LT(e.width(), 1e-3);
}

TEST(Enclosure, WorkedExample) {
  const Enclosure e = enclosure_from_point({3.5, 0.1}, 0.0, 3.8);
  EXPECT_NEAR(e.lower, 3.5 - 0.01 / 0.3, 1e-14);
  EXPECT_NEAR(e.upper, 3.5 + 0.01 / 3.5, 1e-14);
  EXPECT_NEAR(e.lower, 3.4667, 5e-5);
  EXPECT_NEAR(e.upper, 3.5029, 5e-5);
  EXPECT_NEAR(e.sq_lower, e.lower * e.lower, 1e-14);
  EXPECT_NEAR(e.sq_upper, e.upper * e.upper, 1e-14);
}

TEST(Enclosure, RealPointIsDegenerate) {
  const Enclosure e = enclosure_from_point(2.0, 0.0, 3.0);
  EXPECT_EQ(e.lower, 2.0);
  EXPECT_EQ(e.upper, 2.0);
}

TEST(Enclosure, ConjugateGivesSameBounds) {
  const Enclosure a = enclosure_from_point({2.0, 0.3}, 0.5, 3.0), b = enclosure_from_point({2.0, -0.3}, 0.5, 3.0);
  EXPECT_EQ(a.lower, b.lower);
  EXPECT_EQ(a.upper, b.upper);
}

TEST(Enclosure, BoundsStayInsideTheInterval) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double a = u(rng), b = a + 0.1 + 3 * u(rng);
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    const Complex lambda = c + 0.99 * r * u(rng) * std::polar(1.0, 2 * M_PI * u(rng));
    const Enclosure e = enclosure_from_point(lambda, a, b);
    EXPECT_LE(e.lower, lambda.real());
    EXPECT_GE(e.upper, lambda.real());
    EXPECT_GT(e.lower, a);
    EXPECT_LT(e.upper, b);
  }
}

TEST(Enclosure, OutsideDiskIsRejected) {
  EXPECT_FALSE(in_disk({3.5, 2.0}, 0.0, 3.8));
  EXPECT_THROW(enclosure_from_point({3.5, 2.0}, 0.0, 3.8), Error);
  EXPECT_THROW(enclosure_from_point(1.0, 2.0, 1.0), Error);
}

TEST(Enclosure, DefaultDiskEnd) {
  EXPECT_NEAR(default_disk_end(), 0.995 * std::sqrt(disk_constants().j11_sq), 1e-15);
}

TEST(Selection, PicksSmallestImaginaryPartAndWarns) {
  const auto s = synthetic({{3.5, 0.1}, {3.5, -0.1}, {3.6, 0.5}, {3.6, -0.5}});
  const GroundSelection g = select_ground_point(s, 0.0, 3.8);
  EXPECT_EQ(g.lambda, Complex(3.5, 0.1));
  EXPECT_FALSE(g.warnings.empty());
}

TEST(Selection, SinglePairHasNoWarning) {
  const GroundSelection g = select_ground_point(synthetic({{3.5, -0.1}, {3.5, 0.1}, {5.0, 0.0}}), 0.0, 3.8);
  EXPECT_EQ(g.lambda, Complex(3.5, 0.1));
  EXPECT_TRUE(g.warnings.empty());
}

TEST(Selection, EmptyDiskIsAnError) {
  try {
    select_ground_point(synthetic({{5.0, 0.0}, {-1.0, 0.0}}), 0.0, 3.8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNumerical);
  }
}

TEST(Selection, KernelAndFailedPointsAreSkipped) {
  SecondOrderSpectrum s = synthetic({{1e-9, 0.0}, {2.0, 0.2}, {2.0, -0.2}});
  s.points.push_back({{1.5, 0.01}, 1.0, 1e-3});
  const GroundSelection g = select_ground_point(s, 0.0, 3.8);
  EXPECT_EQ(g.lambda, Complex(2.0, 0.2));
  EXPECT_FALSE(g.warnings.empty());
}

TEST(BlockOracle, Diagonal) {
  Eigen::MatrixXd T(2, 2);
  T << 1, 0, 0, 2;
  const BlockOracleReport r = block_operator_oracle(T);
  ASSERT_EQ(r.eigenvalues.size(), 4u);
  EXPECT_NEAR(r.eigenvalues[0], -2, 1e-14);
  EXPECT_NEAR(r.eigenvalues[1], -1, 1e-14);
  EXPECT_NEAR(r.eigenvalues[2], 1, 1e-14);
  EXPECT_NEAR(r.eigenvalues[3], 2, 1e-14);
  EXPECT_TRUE(r.passed());
}

TEST(BlockOracle, ShiftLikeRow) {
  Eigen::MatrixXd T(1, 2);
  T << 1, 0;
  const BlockOracleReport r = block_operator_oracle(T);
  EXPECT_EQ(r.zero_multiplicity, 1u);
  EXPECT_EQ(r.kernel_dim, 1u);
  EXPECT_EQ(r.cokernel_dim, 0u);
  EXPECT_TRUE(r.passed());
}

// T = A B with inner dimension k has rank k, so E has m + n - 2k zero
// eigenvalues whatever the solver says.
TEST(BlockOracle, RankDeficientProducts) {
  std::mt19937 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 2 + trial % 9, n = 3 + (trial * 7) % 9, k = 1 + trial % std::min(m, n);
    Eigen::MatrixXd A(m, k), B(k, n);
    for (int i = 0; i < A.size(); ++i) A.data()[i] = g(rng);
    for (int i = 0; i < B.size(); ++i) B.data()[i] = g(rng);
    const BlockOracleReport r = block_operator_oracle(A * B, 1e-10, 1e-9);
    EXPECT_EQ(r.zero_multiplicity, static_cast<std::size_t>(m + n - 2 * k)) << m << "x" << n << " rank " << k;
    EXPECT_EQ(r.kernel_dim, static_cast<std::size_t>(n - k));
    EXPECT_EQ(r.cokernel_dim, static_cast<std::size_t>(m - k));
    EXPECT_TRUE(r.passed());
  }
}

TEST(BlockOracle, RandomFiveBySeven) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::MatrixXd T(5, 7);
  for (int i = 0; i < T.size(); ++i) T.data()[i] = u(rng);
  const BlockOracleReport r = block_operator_oracle(T);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.zero_multiplicity, 2u);
  EXPECT_LT(r.pairing_error, 1e-10);
  // Frobenius norm check: sum of squared eigenvalues of E is 2 |T|_F^2.
  double s = 0.0;
  for (double e : r.eigenvalues) s += e * e;
  EXPECT_NEAR(s, 2.0 * T.squaredNorm(), 1e-12);
}

TEST(LocalModes, SingleModeIsRecovered) {
  const double alpha = 2.0 / 3.0, omega = 2.0, R = 0.3;
  const auto theta = local_mode_angles(alpha, 64);
  std::vector<double> u;
  for (double t : theta) u.push_back(bessel_j(1.0 / alpha, omega * R) * std::sin(t / alpha));
  const auto a = local_mode_coefficients(alpha, omega, R, u, 5);
  EXPECT_NEAR(a[0], 1.0, 1e-12);
  // Rounding in the samples is divided by J_{n/alpha}(omega R), which is small for large n.
  for (std::size_t n = 1; n < a.size(); ++n) EXPECT_NEAR(a[n], 0.0, 1e-8);
}

TEST(LocalModes, ZeroDataGivesZeroCoefficients) {
  const auto a = local_mode_coefficients(0.5, 1.0, 0.5, std::vector<double>(32, 0.0), 4);
  for (double x : a) EXPECT_EQ(x, 0.0);
}

TEST(LocalModes, TwoModeRoundTrip) {
  const double alpha = 0.5, omega = 1.0, R = 1.2;
  const auto theta = local_mode_angles(alpha, 48);
  std::vector<double> u;
  for (double t : theta)
    u.push_back(0.7 * oracle::bessel_integral(2, omega * R) * std::sin(2 * t) -
                1.3 * oracle::bessel_integral(6, omega * R) * std::sin(6 * t));
  const auto a = local_mode_coefficients(alpha, omega, R, u, 4);
  EXPECT_NEAR(a[0], 0.7, 1e-8);
  EXPECT_NEAR(a[1], 0.0, 1e-8);
  EXPECT_NEAR(a[2], -1.3, 1e-8);
  EXPECT_NEAR(a[3], 0.0, 1e-8);
}

TEST(LocalModes, RadiusLimits) {
  const std::vector<double> u(16, 0.0);
  EXPECT_THROW(local_mode_coefficients(0.5, 1.0, 2.0, u, 3), Error);
  EXPECT_THROW(local_mode_coefficients(0.5, 1.0, 0.5, u, 3, 0.4), Error);
  EXPECT_THROW(local_mode_coefficients(0.5, 1.0, 0.5, u, 16), Error);
}
