#include "fracspec/fem/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "fracspec/error.hpp"
#include "fracspec/fem/lagrange.hpp"

namespace fracspec::fem {
namespace {

// Local matrices of one element, all N x N over the scalar basis.
struct LocalMatrices {
  Eigen::MatrixXd stiffness, div_xx, div_xy, div_yy, grad_x_mass, grad_y_mass, weighted_mass, mass;
  std::size_t samples = 0;
};

LocalMatrices element_matrices(const TriangleMesh& mesh, const LagrangeBasis& basis, const ElementQuadrature& quad,
                               const Weight& weight, std::size_t e) {
  const auto& t = mesh.triangles[e];
  const Point a = mesh.vertices[t[0]], b = mesh.vertices[t[1]], c = mesh.vertices[t[2]];
  const std::vector<QuadPoint> pts = quad.points(e);
  const Eigen::Index q = static_cast<Eigen::Index>(pts.size());

  // Reference coordinates from z = a + x (b - a) + y (c - a).
  const double det = cross(b - a, c - a);
  Eigen::MatrixX2d ref(q, 2);
  Eigen::VectorXd w(q), f(q);
  const bool unit = weight.is_unit();
  for (Eigen::Index i = 0; i < q; ++i) {
    const QuadPoint& p = pts[static_cast<std::size_t>(i)];
    const Complex d = p.z - a;
    ref(i, 0) = cross(d, c - a) / det;
    ref(i, 1) = cross(b - a, d) / det;
    w(i) = p.w;
    f(i) = unit ? 1.0 : (p.singular >= 0 ? weight.near(static_cast<std::size_t>(p.singular), p.offset) : weight.at(p.z));
    if (!(std::isfinite(f(i)) && f(i) > 0.0))
      fail(ErrorKind::kNumerical, "weight is not finite and positive at a quadrature point of element " +
                                      std::to_string(e));
  }
  Eigen::MatrixXd phi, dx, dy;
  basis.evaluate(ref, phi, dx, dy);
  // Physical gradients: inverse transpose of the Jacobian [b - a, c - a].
  const double j11 = (c - a).imag() / det, j12 = -(b - a).imag() / det;
  const double j21 = -(c - a).real() / det, j22 = (b - a).real() / det;
  const Eigen::MatrixXd gx = j11 * dx + j12 * dy;
  const Eigen::MatrixXd gy = j21 * dx + j22 * dy;

  const Eigen::VectorXd w_inv = w.array() / f.array().square();
  const Eigen::VectorXd w_sq = w.array() * f.array().square();
  auto sym = [](const Eigen::MatrixXd& m) -> Eigen::MatrixXd { return 0.5 * (m + m.transpose()); };
  LocalMatrices out;
  out.stiffness = sym(gx.transpose() * w.asDiagonal() * gx + gy.transpose() * w.asDiagonal() * gy);
  out.div_xx = sym(gx.transpose() * w_inv.asDiagonal() * gx);
  out.div_xy = gx.transpose() * w_inv.asDiagonal() * gy;
  out.div_yy = sym(gy.transpose() * w_inv.asDiagonal() * gy);
  out.grad_x_mass = gx.transpose() * w.asDiagonal() * phi;
  out.grad_y_mass = gy.transpose() * w.asDiagonal() * phi;
  out.weighted_mass = sym(phi.transpose() * w_sq.asDiagonal() * phi);
  out.mass = sym(phi.transpose() * w.asDiagonal() * phi);
  out.samples = pts.size();
  return out;
}

// Symmetric scalar sparsity pattern in compressed rows.
struct Pattern {
  std::vector<std::size_t> start;
  std::vector<std::size_t> column;

  std::size_t find(std::size_t row, std::size_t col) const {
    const auto first = column.begin() + static_cast<std::ptrdiff_t>(start[row]);
    const auto last = column.begin() + static_cast<std::ptrdiff_t>(start[row + 1]);
    return static_cast<std::size_t>(std::lower_bound(first, last, col) - column.begin());
  }
};

Pattern scalar_pattern(const DofMap& dofs, std::size_t elements) {
  const std::size_t n = dofs.scalar_count(), k = dofs.dofs_per_element();
  std::vector<std::vector<std::size_t>> rows(n);
  for (std::size_t e = 0; e < elements; ++e) {
    const std::size_t* d = dofs.element_dofs(e);
    for (std::size_t a = 0; a < k; ++a) rows[d[a]].insert(rows[d[a]].end(), d, d + k);
  }
  Pattern p;
  p.start.push_back(0);
  for (auto& r : rows) {
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    p.column.insert(p.column.end(), r.begin(), r.end());
    p.start.push_back(p.column.size());
    r.clear();
    r.shrink_to_fit();
  }
  return p;
}

enum Field { kV = 0, kT1 = 1, kT2 = 2 };

struct Block {
  Field row, col;
  const std::vector<double>* values;
  bool transpose;  // use the value stored at (col, row)
};

// Builds a pencil matrix from scalar blocks. Column-major output with rows
// sorted: blocks are visited in row-field order, v rows skip the boundary.
SparseMatrix block_matrix(const DofMap& dofs, const Pattern& pattern, const std::vector<Block>& blocks) {
  const std::size_t n = dofs.pencil_size();
  std::vector<Eigen::Index> outer{0};
  std::vector<Eigen::Index> inner;
  std::vector<double> values;
  auto global = [&](Field f, std::size_t s) -> long {
    switch (f) {
      case kV: return dofs.v_index(s);
      case kT1: return static_cast<long>(dofs.t1_index(s));
      default: return static_cast<long>(dofs.t2_index(s));
    }
  };
  for (int cf = 0; cf < 3; ++cf) {
    for (std::size_t cs = 0; cs < dofs.scalar_count(); ++cs) {
      if (global(static_cast<Field>(cf), cs) < 0) continue;
      for (int rf = 0; rf < 3; ++rf) {
        for (const Block& b : blocks) {
          if (b.row != rf || b.col != cf) continue;
          // Pattern is symmetric: rows of column cs are the columns of row cs.
          for (std::size_t k = pattern.start[cs]; k < pattern.start[cs + 1]; ++k) {
            const std::size_t rs = pattern.column[k];
            const long r = global(static_cast<Field>(rf), rs);
            if (r < 0) continue;
            const double v = b.transpose ? (*b.values)[k] : (*b.values)[pattern.find(rs, cs)];
            inner.push_back(r);
            values.push_back(v);
          }
        }
      }
      outer.push_back(static_cast<Eigen::Index>(inner.size()));
    }
  }
  SparseMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.resizeNonZeros(static_cast<Eigen::Index>(values.size()));
  std::copy(outer.begin(), outer.end(), m.outerIndexPtr());
  std::copy(inner.begin(), inner.end(), m.innerIndexPtr());
  std::copy(values.begin(), values.end(), m.valuePtr());
  m.finalize();
  return m;
}

}  // namespace

QuadraticPencil assemble_pencil(const TriangleMesh& mesh, const DofMap& dofs, const Weight& weight,
                                const AssemblyOptions& options) {
  const LagrangeBasis basis(dofs.order());
  const ElementQuadrature quad(mesh, dofs.order(), weight, options.quadrature);
  const Pattern pattern = scalar_pattern(dofs, mesh.triangles.size());
  const std::size_t nnz = pattern.column.size();
  // Scalar matrices aligned with the pattern; (row, col) holds the integral
  // of (row function) x (col function) in the order of the names.
  std::vector<double> stiffness(nnz), div_xx(nnz), div_xy(nnz), div_yy(nnz), gx_mass(nnz), gy_mass(nnz),
      weighted_mass(nnz), mass(nnz);
  const std::size_t k = dofs.dofs_per_element();
  std::size_t samples = 0;

  const std::size_t elements = mesh.triangles.size();
  const int jobs = std::max(1, options.jobs);
  const std::size_t chunk = 64;
  std::vector<LocalMatrices> local(chunk);
  for (std::size_t first = 0; first < elements; first += chunk) {
    const std::size_t count = std::min(chunk, elements - first);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
    auto work = [&](int job) {
      try {
        for (std::size_t i = static_cast<std::size_t>(job); i < count; i += static_cast<std::size_t>(jobs))
          local[i] = element_matrices(mesh, basis, quad, weight, first + i);
      } catch (...) {
        errors[static_cast<std::size_t>(job)] = std::current_exception();
      }
    };
    if (jobs == 1) {
      work(0);
    } else {
      std::vector<std::thread> threads;
      for (int j = 0; j < jobs; ++j) threads.emplace_back(work, j);
      for (auto& th : threads) th.join();
    }
    for (const auto& err : errors)
      if (err) std::rethrow_exception(err);
    // Sequential sum in element order.
    for (std::size_t i = 0; i < count; ++i) {
      const LocalMatrices& m = local[i];
      const std::size_t* d = dofs.element_dofs(first + i);
      samples += m.samples;
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
          const std::size_t pos = pattern.find(d[a], d[b]);
          const auto ia = static_cast<Eigen::Index>(a), ib = static_cast<Eigen::Index>(b);
          stiffness[pos] += m.stiffness(ia, ib);
          div_xx[pos] += m.div_xx(ia, ib);
          div_xy[pos] += m.div_xy(ia, ib);
          div_yy[pos] += m.div_yy(ia, ib);
          gx_mass[pos] += m.grad_x_mass(ia, ib);
          gy_mass[pos] += m.grad_y_mass(ia, ib);
          weighted_mass[pos] += m.weighted_mass(ia, ib);
          mass[pos] += m.mass(ia, ib);
        }
      }
    }
  }

  QuadraticPencil pencil;
  // div_xy(row, col) = int dx(row) dy(col): block (t1, t2) uses it directly,
  // block (t2, t1) its transpose. Same for the gradient-mass couplings.
  pencil.K = block_matrix(dofs, pattern,
                          {{kV, kV, &stiffness, false},
                           {kT1, kT1, &div_xx, false},
                           {kT1, kT2, &div_xy, false},
                           {kT2, kT1, &div_xy, true},
                           {kT2, kT2, &div_yy, false}});
  pencil.L = block_matrix(dofs, pattern,
                          {{kV, kT1, &gx_mass, false},
                           {kV, kT2, &gy_mass, false},
                           {kT1, kV, &gx_mass, true},
                           {kT2, kV, &gy_mass, true}});
  pencil.M = block_matrix(dofs, pattern,
                          {{kV, kV, &weighted_mass, false}, {kT1, kT1, &mass, false}, {kT2, kT2, &mass, false}});
  pencil.order = dofs.order();
  pencil.refinement = mesh.refinement_level;
  pencil.quadrature_degree = quadrature_degree(dofs.order(), WeightKind::kInterior);
  pencil.v_count = dofs.v_count();
  pencil.scalar_dofs = dofs.scalar_count();
  pencil.dirichlet_dofs = dofs.dirichlet_count();
  pencil.weight_samples = samples;
  return pencil;
}

void write_matrix_market(const SparseMatrix& a, const std::string& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::kIo, "cannot write " + path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << '\n';
  out.precision(17);
  for (Eigen::Index c = 0; c < a.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
  require(static_cast<bool>(out), ErrorKind::kIo, "failed writing " + path);
}

SparseMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::kIo, "cannot read " + path);
  std::string line;
  std::getline(in, line);
  require(line.rfind("%%MatrixMarket matrix coordinate real", 0) == 0, ErrorKind::kIo, "unsupported Matrix Market header");
  while (std::getline(in, line) && !line.empty() && line[0] == '%') {
  }
  std::istringstream head(line);
  long rows = 0, cols = 0, nnz = 0;
  head >> rows >> cols >> nnz;
  require(rows > 0 && cols > 0 && nnz >= 0, ErrorKind::kIo, "bad Matrix Market size line");
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(nnz));
  for (long i = 0; i < nnz; ++i) {
    long r, c;
    double v;
    require(static_cast<bool>(in >> r >> c >> v), ErrorKind::kIo, "truncated Matrix Market data");
    triplets.emplace_back(r - 1, c - 1, v);
  }
  SparseMatrix a(rows, cols);
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

}  // namespace fracspec::fem
