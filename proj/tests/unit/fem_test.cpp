#include <gtest/gtest.h>

#include <Eigen/SparseCholesky>
#include <cmath>
#include <filesystem>
#include <random>

#include "fracspec/conformal/composite.hpp"
#include "fracspec/error.hpp"
#include "fracspec/fem/assembly.hpp"
#include "fracspec/fem/triangle_quadrature.hpp"
#include "fracspec/geometry/koch.hpp"
#include "fracspec/spectral/qep.hpp"
#include "oracles.hpp"

using namespace fracspec;
using namespace fracspec::fem;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

// Largest entry of A - A^T relative to the largest entry of A.
double asymmetry(const SparseMatrix& a) {
  const SparseMatrix d = SparseMatrix(a.transpose()) - a;
  double worst = 0.0, scale = 0.0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(d, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  for (int k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
  return worst / scale;
}

QuadraticPencil unit_pencil(BaseShape shape, int refinements, int p, int jobs = 1) {
  const TriangleMesh mesh = uniform_mesh(shape, refinements);
  const DofMap dofs(mesh, p);
  AssemblyOptions opt;
  opt.jobs = jobs;
  return assemble_pencil(mesh, dofs, UnitWeight(), opt);
}

}  // namespace

TEST(Mesh, InitialMeshes) {
  const TriangleMesh t = initial_mesh(BaseShape::kTriangle);
  EXPECT_EQ(t.num_triangles(), 4u);
  EXPECT_EQ(t.vertices.size(), 6u);
  const TriangleMesh h = initial_mesh(BaseShape::kHexagon);
  EXPECT_EQ(h.num_triangles(), 6u);
  EXPECT_EQ(h.vertices.size(), 7u);
  EXPECT_EQ(std::count(h.boundary_vertex.begin(), h.boundary_vertex.end(), true), 6);
}

TEST(Mesh, RefinementCounts) {
  EXPECT_EQ(uniform_mesh(BaseShape::kHexagon, 2).num_triangles(), 96u);
  EXPECT_EQ(uniform_mesh(BaseShape::kTriangle, 4).num_triangles(), 1024u);
  for (int r = 0; r <= 4; ++r) {
    const TriangleMesh m = uniform_mesh(BaseShape::kTriangle, r);
    // The level-r triangle has 3 * 2^{r+1} boundary edges.
    EXPECT_EQ(std::count(m.boundary_vertex.begin(), m.boundary_vertex.end(), true), 3 << (r + 1));
    const EdgeTable e = build_edges(m);
    EXPECT_EQ(static_cast<long>(m.vertices.size()) - static_cast<long>(e.edges.size()) +
                  static_cast<long>(m.num_triangles()),
              1);
  }
}

TEST(Mesh, AreaAndCongruencePreserved) {
  for (int r = 0; r <= 5; ++r) {
    const TriangleMesh t = uniform_mesh(BaseShape::kTriangle, r);
    double area = 0.0;
    for (const auto& tri : t.triangles)
      area += oracle::shoelace_area({t.vertices[tri[0]], t.vertices[tri[1]], t.vertices[tri[2]]});
    EXPECT_NEAR(area, 3.0 * std::sqrt(3.0) / 4.0, 1e-13);
    EXPECT_LT(congruence_defect(t), 1e-12);
    const TriangleMesh h = uniform_mesh(BaseShape::kHexagon, r);
    EXPECT_NEAR(h.total_area(), 3.0 * std::sqrt(3.0) / 2.0, 1e-13);
    EXPECT_LT(congruence_defect(h), 1e-12);
    EXPECT_NEAR(h.element_size(), 1.0 / std::pow(2.0, r), 1e-15);
  }
}

TEST(Mesh, VerticesMatchBasePolygons) {
  const TriangleMesh t = initial_mesh(BaseShape::kTriangle);
  const geometry::Polygon t0 = geometry::koch_inner(0);
  for (const Point& v : t0.vertices()) {
    bool found = false;
    for (const Point& w : t.vertices) found = found || std::abs(v - w) < 1e-15;
    EXPECT_TRUE(found);
  }
}

TEST(Lagrange, NodalAndPartitionOfUnity) {
  for (int p = 1; p <= kMaxOrder; ++p) {
    const LagrangeBasis basis(p);
    ASSERT_EQ(basis.size(), (p + 1) * (p + 2) / 2);
    Eigen::MatrixX2d nodes(basis.size(), 2);
    for (int k = 0; k < basis.size(); ++k)
      nodes.row(k) << static_cast<double>(basis.lattice(k)[0]) / p, static_cast<double>(basis.lattice(k)[1]) / p;
    Eigen::MatrixXd v, dx, dy;
    basis.evaluate(nodes, v, dx, dy);
    EXPECT_LT((v - Eigen::MatrixXd::Identity(basis.size(), basis.size())).cwiseAbs().maxCoeff(), 1e-10) << "p=" << p;
    EXPECT_LT((v.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-11);
    EXPECT_LT(dx.rowwise().sum().cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT(dy.rowwise().sum().cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Lagrange, ReproducesPolynomialsOfDegreeP) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  for (int p = 1; p <= 6; ++p) {
    const LagrangeBasis basis(p);
    Eigen::MatrixX2d nodes(basis.size(), 2);
    for (int k = 0; k < basis.size(); ++k)
      nodes.row(k) << static_cast<double>(basis.lattice(k)[0]) / p, static_cast<double>(basis.lattice(k)[1]) / p;
    auto poly = [p](double x, double y) { return std::pow(x, p) - 2 * std::pow(y, p - 1) * x + 0.5; };
    auto poly_dx = [p](double x, double y) { return p * std::pow(x, p - 1) - 2 * std::pow(y, p - 1); };
    Eigen::VectorXd coeff(basis.size());
    for (int k = 0; k < basis.size(); ++k) coeff[k] = poly(nodes(k, 0), nodes(k, 1));
    Eigen::MatrixX2d pts(5, 2);
    for (int i = 0; i < 5; ++i) pts.row(i) << u(rng), u(rng);
    Eigen::MatrixXd v, dx, dy;
    basis.evaluate(pts, v, dx, dy);
    for (int i = 0; i < 5; ++i) {
      EXPECT_NEAR((v.row(i) * coeff)(0), poly(pts(i, 0), pts(i, 1)), 1e-11);
      EXPECT_NEAR((dx.row(i) * coeff)(0), poly_dx(pts(i, 0), pts(i, 1)), 1e-9);
    }
  }
}

TEST(TriangleQuadrature, MonomialExactness) {
  for (int degree : {2, 8, 14, 20}) {
    const TriangleRule& r = collapsed_gauss(degree);
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < r.w.size(); ++i) s += r.w[i] * std::pow(r.x[i], a) * std::pow(r.y[i], b);
        const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
        EXPECT_NEAR(s, exact, 1e-14 * std::max(1.0, exact * 1e3)) << degree << " " << a << " " << b;
      }
  }
}

TEST(TriangleQuadrature, DegreesForOrder) {
  EXPECT_EQ(quadrature_degree(5, WeightKind::kInterior), 14);
  EXPECT_EQ(quadrature_degree(5, WeightKind::kBoundary), 20);
  EXPECT_THROW(quadrature_degree(9, WeightKind::kInterior), Error);
  EXPECT_THROW(quadrature_degree(0, WeightKind::kInterior), Error);
}

// The integral of |f'|^2 over the base polygon is the area of the image.
TEST(TriangleQuadrature, WeightedAreaIdentity) {
  const geometry::Polygon t0 = geometry::koch_inner(0), t1 = geometry::koch_inner(1);
  const conformal::CompositeMap f(
      conformal::solve_parameter_problem(t0, conformal::symmetric_fixed_prevertices(t0, 3)),
      conformal::solve_parameter_problem(t1, conformal::symmetric_fixed_prevertices(t1, 3)));
  const MapWeight weight(f);
  const TriangleMesh mesh = uniform_mesh(BaseShape::kTriangle, 3);
  const ElementQuadrature quad(mesh, 5, weight);
  double plain = 0.0, weighted = 0.0;
  for (std::size_t e = 0; e < mesh.num_triangles(); ++e)
    for (const QuadPoint& q : quad.points(e)) {
      const double w = q.singular >= 0 ? weight.near(static_cast<std::size_t>(q.singular), q.offset) : weight.at(q.z);
      plain += q.w;
      weighted += q.w * w * w;
    }
  EXPECT_NEAR(plain, t0.area(), 1e-13);
  EXPECT_NEAR(weighted / t1.area(), 1.0, 1e-6);
}

TEST(DofMap, Counts) {
  const TriangleMesh mesh = uniform_mesh(BaseShape::kHexagon, 2);
  const EdgeTable edges = build_edges(mesh);
  std::size_t boundary_edges = 0;
  for (std::size_t k = 0; k < edges.edges.size(); ++k) boundary_edges += edges.is_boundary(k);
  for (int p = 1; p <= 5; ++p) {
    const DofMap d(mesh, p);
    const std::size_t expected = mesh.vertices.size() + (p - 1) * edges.edges.size() +
                                 (p - 1) * (p - 2) / 2 * mesh.num_triangles();
    EXPECT_EQ(d.scalar_count(), expected);
    EXPECT_EQ(d.dirichlet_count(), p * boundary_edges);
    EXPECT_EQ(d.pencil_size(), d.v_count() + 2 * d.scalar_count());
  }
}

TEST(DofMap, BoundaryNodesLieOnTheBoundary) {
  const TriangleMesh mesh = uniform_mesh(BaseShape::kTriangle, 2);
  const DofMap d(mesh, 4);
  const geometry::Polygon t0 = geometry::koch_inner(0);
  for (std::size_t k = 0; k < d.scalar_count(); ++k) {
    const auto where = geometry::locate(t0, d.node(k), 1e-12);
    EXPECT_EQ(where == geometry::Location::kBoundary, d.on_boundary(k));
    EXPECT_EQ(d.v_index(k) < 0, d.on_boundary(k));
  }
}

TEST(Assembly, SymmetricAndDefinite) {
  const QuadraticPencil pen = unit_pencil(BaseShape::kTriangle, 2, 3);
  EXPECT_LT(asymmetry(pen.K), 1e-12);
  EXPECT_LT(asymmetry(pen.L), 1e-12);
  EXPECT_LT(asymmetry(pen.M), 1e-12);
  Eigen::SimplicialLLT<SparseMatrix> llt(pen.M);
  EXPECT_EQ(llt.info(), Eigen::Success);
  EXPECT_EQ(pen.K.rows(), pen.L.rows());
  EXPECT_EQ(pen.K.rows(), pen.M.rows());
}

TEST(Assembly, MassRowSumsGiveArea) {
  const QuadraticPencil pen = unit_pencil(BaseShape::kHexagon, 1, 4);
  const std::size_t v = pen.v_count, n = pen.scalar_dofs;
  const Eigen::MatrixXd M(pen.M);
  EXPECT_NEAR(M.block(v, v, n, n).sum(), 3.0 * std::sqrt(3.0) / 2.0, 1e-12);
  EXPECT_NEAR(M.block(v + n, v + n, n, n).sum(), 3.0 * std::sqrt(3.0) / 2.0, 1e-12);
  EXPECT_NEAR(M.block(v, v + n, n, n).cwiseAbs().sum(), 0.0, 1e-15);
}

// A constant field t has no divergence, and integrating grad v over the
// domain gives zero for v vanishing on the boundary.
TEST(Assembly, ConstantFieldsAreInvisible) {
  const QuadraticPencil pen = unit_pencil(BaseShape::kTriangle, 2, 3);
  const std::size_t v = pen.v_count, n = pen.scalar_dofs;
  Eigen::VectorXd t = Eigen::VectorXd::Zero(pen.size());
  t.segment(v, n).setConstant(1.0);
  t.segment(v + n, n).setConstant(-0.5);
  EXPECT_LT((pen.K * t).cwiseAbs().maxCoeff(), 1e-11);
  EXPECT_LT((pen.L * t).cwiseAbs().maxCoeff(), 1e-11);
}

TEST(Assembly, ThreadCountDoesNotChangeTheResult) {
  const QuadraticPencil a = unit_pencil(BaseShape::kHexagon, 2, 3, 1);
  const QuadraticPencil b = unit_pencil(BaseShape::kHexagon, 2, 3, 3);
  EXPECT_EQ(Eigen::MatrixXd(a.K), Eigen::MatrixXd(b.K));
  EXPECT_EQ(Eigen::MatrixXd(a.L), Eigen::MatrixXd(b.L));
  EXPECT_EQ(Eigen::MatrixXd(a.M), Eigen::MatrixXd(b.M));
}

TEST(Assembly, RejectsBadWeight) {
  const TriangleMesh mesh = uniform_mesh(BaseShape::kTriangle, 1);
  const DofMap dofs(mesh, 2);
  const FunctionWeight zero([](Point) { return 0.0; });
  EXPECT_THROW(assemble_pencil(mesh, dofs, zero), Error);
}

TEST(Assembly, MatrixMarketRoundTrip) {
  const QuadraticPencil pen = unit_pencil(BaseShape::kTriangle, 1, 2);
  const auto path = std::filesystem::temp_directory_path() / "fracspec_fem_test_K.mtx";
  write_matrix_market(pen.K, path.string());
  const SparseMatrix back = read_matrix_market(path.string());
  EXPECT_EQ(Eigen::MatrixXd(back), Eigen::MatrixXd(pen.K));
  std::filesystem::remove(path);
}

TEST(Assembly, WeightFreeSpectrumIsConjugateSymmetric) {
  const QuadraticPencil pen = unit_pencil(BaseShape::kTriangle, 1, 1);
  const spectral::SecondOrderSpectrum s = spectral::solve_qep(pen);
  ASSERT_EQ(s.points.size(), 2 * pen.size());
  for (const auto& p : s.points) {
    double best = 1e300;
    for (const auto& q : s.points) best = std::min(best, std::abs(q.lambda - std::conj(p.lambda)));
    EXPECT_LT(best, 1e-9 * std::max(1.0, std::abs(p.lambda)));
  }
}
