#include "fracspec/spectral/qep.hpp"

#include <Eigen/CholmodSupport>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <arpack/arpack.hpp>
#include <cmath>
#include <lapacke.h>
#include <mutex>

#include "fracspec/error.hpp"

namespace fracspec::spectral {
namespace {

double norm1(const SparseMatrix& a) {
  double best = 0.0;
  for (Eigen::Index c = 0; c < a.outerSize(); ++c) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

double residual_tolerance(Complex lambda, double nk, double nl, double nm) {
  const double r = std::abs(lambda);
  return 1e-8 * (nk + r * nl + r * r * nm);
}

// ARPACK keeps state in Fortran SAVE variables, so one session at a time.
std::mutex& arpack_mutex() {
  static std::mutex m;
  return m;
}

using Cholesky = Eigen::CholmodDecomposition<SparseMatrix, Eigen::Lower>;

void factor(Cholesky& solver, const SparseMatrix& a, const char* what) {
  solver.compute(a);
  require(solver.info() == Eigen::Success, ErrorKind::kNumerical, std::string("sparse Cholesky failed for ") + what);
}

}  // namespace

SecondOrderSpectrum solve_qep(const SparseMatrix& K, const SparseMatrix& L, const SparseMatrix& M) {
  const Eigen::Index d = K.rows();
  require(d > 0 && L.rows() == d && M.rows() == d, ErrorKind::kPrecondition, "pencil matrices must share their size");
  const Eigen::MatrixXd k = Eigen::MatrixXd(K), l = Eigen::MatrixXd(L), m = Eigen::MatrixXd(M);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * d, 2 * d), b = Eigen::MatrixXd::Zero(2 * d, 2 * d);
  a.topRightCorner(d, d).setIdentity();
  a.bottomLeftCorner(d, d) = -k;
  a.bottomRightCorner(d, d) = 2.0 * l;
  b.topLeftCorner(d, d).setIdentity();
  b.bottomRightCorner(d, d) = m;
  // LAPACK QZ (dggev) on column-major copies, with right eigenvectors.
  const lapack_int nn = static_cast<lapack_int>(2 * d);
  Eigen::VectorXd alpha_r(nn), alpha_i(nn), beta(nn);
  Eigen::MatrixXd vr(nn, nn);
  const lapack_int info = LAPACKE_dggev(LAPACK_COL_MAJOR, 'N', 'V', nn, a.data(), nn, b.data(), nn, alpha_r.data(),
                                        alpha_i.data(), beta.data(), nullptr, 1, vr.data(), nn);
  require(info == 0, ErrorKind::kNumerical, "QZ failed on the companion pencil, code " + std::to_string(info));

  const double nk = norm1(K), nl = norm1(L), nm = norm1(M);
  SecondOrderSpectrum out;
  out.linearization = "companion [[0, I], [-K, 2L]] vs diag(I, M), dense QZ";
  for (Eigen::Index i = 0; i < 2 * d; ++i) {
    if (beta(i) == 0.0) continue;  // infinite; M is definite so this needs a breakdown
    const Complex lambda = Complex(alpha_r(i), alpha_i(i)) / beta(i);
    // Complex pairs share two real columns, re + i im and re - i im.
    Eigen::VectorXcd z;
    if (alpha_i(i) == 0.0) {
      z = vr.col(i).cast<Complex>();
    } else {
      const Eigen::Index first = alpha_i(i) > 0.0 ? i : i - 1;
      const double sign = alpha_i(i) > 0.0 ? 1.0 : -1.0;
      z = vr.col(first).cast<Complex>() + Complex(0.0, sign) * vr.col(first + 1).cast<Complex>();
    }
    // z = (x, lambda x); the lower half carries x when lambda is large.
    Eigen::VectorXcd x = z.head(d);
    if (std::abs(lambda) > 1.0) x = z.tail(d) / lambda;
    const Eigen::VectorXcd qx = K.cast<Complex>() * x - (2.0 * lambda) * (L.cast<Complex>() * x) +
                                (lambda * lambda) * (M.cast<Complex>() * x);
    out.points.push_back({lambda, qx.norm() / x.norm(), residual_tolerance(lambda, nk, nl, nm)});
  }
  return out;
}

SecondOrderSpectrum solve_qep_near(const fem::QuadraticPencil& pencil, double sigma, const ShiftInvertOptions& options) {
  const SparseMatrix& K = pencil.K;
  const SparseMatrix& L = pencil.L;
  const SparseMatrix& M = pencil.M;
  const Eigen::Index d = K.rows();
  const a_int n = static_cast<a_int>(2 * d);
  const a_int nev = std::min<a_int>(options.count, n - 2);
  const a_int ncv = std::min<a_int>(std::max<a_int>(options.subspace, 2 * nev + 1), n);
  require(nev >= 1, ErrorKind::kPrecondition, "pencil too small for the sparse solver");

  // Q(sigma) is semidefinite and singular at an eigenvalue. Close to one
  // the factorization breaks down, or succeeds with inaccurate solves, so
  // move well away.
  Cholesky chol;
  chol.cholmod().print = 0;  // breakdowns are handled here
  const double sigma0 = sigma;
  for (int attempt = 0;; ++attempt) {
    chol.compute(SparseMatrix(K - (2.0 * sigma) * L + (sigma * sigma) * M));
    if (chol.info() == Eigen::Success) break;
    require(attempt < 5, ErrorKind::kNumerical, "sparse Cholesky failed for Q(sigma) near sigma = " + std::to_string(sigma0));
    sigma = sigma0 * (1.0 + 1e-3 * std::pow(2.0, attempt));
  }
  const SparseMatrix two_l_minus = 2.0 * L - sigma * M;

  std::vector<double> resid(static_cast<std::size_t>(n), 1.0), v(static_cast<std::size_t>(n * ncv)),
      workd(static_cast<std::size_t>(3 * n)), workl(static_cast<std::size_t>(3 * ncv * ncv + 6 * ncv));
  // Deterministic start vector.
  for (a_int i = 0; i < n; ++i) resid[static_cast<std::size_t>(i)] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i));
  a_int iparam[11] = {}, ipntr[14] = {};
  iparam[0] = 1;
  iparam[2] = options.max_iterations;
  iparam[6] = 1;
  a_int ido = 0, info = 1;
  const a_int lworkl = static_cast<a_int>(workl.size());
  std::unique_lock<std::mutex> session(arpack_mutex());
  while (true) {
    arpack::naupd(ido, arpack::bmat::identity, n, arpack::which::largest_magnitude, nev, options.tolerance,
                  resid.data(), ncv, v.data(), n, iparam, ipntr, workd.data(), workl.data(), lworkl, info);
    if (ido != -1 && ido != 1) break;
    const Eigen::Map<const Eigen::VectorXd> in(&workd[static_cast<std::size_t>(ipntr[0] - 1)], n);
    Eigen::Map<Eigen::VectorXd> out(&workd[static_cast<std::size_t>(ipntr[1] - 1)], n);
    const Eigen::VectorXd u = chol.solve(two_l_minus * in.head(d) - M * in.tail(d));
    out.head(d) = u;
    out.tail(d) = in.head(d) + sigma * u;
  }
  require(info >= 0, ErrorKind::kNumerical, "ARPACK iteration failed with code " + std::to_string(info));

  std::vector<a_int> select(static_cast<std::size_t>(ncv));
  std::vector<double> dr(static_cast<std::size_t>(nev + 1)), di(static_cast<std::size_t>(nev + 1)),
      z(static_cast<std::size_t>(n * (nev + 1))), workev(static_cast<std::size_t>(3 * ncv));
  a_int info_eupd = 0;
  arpack::neupd(1, arpack::howmny::ritz_vectors, select.data(), dr.data(), di.data(), z.data(), n, 0.0, 0.0,
                workev.data(), arpack::bmat::identity, n, arpack::which::largest_magnitude, nev, options.tolerance,
                resid.data(), ncv, v.data(), n, iparam, ipntr, workd.data(), workl.data(), lworkl, info_eupd);
  session.unlock();
  require(info_eupd == 0, ErrorKind::kNumerical, "ARPACK eigenvector extraction failed with code " + std::to_string(info_eupd));

  const double nk = norm1(K), nl = norm1(L), nm = norm1(M);
  SecondOrderSpectrum out;
  out.linearization = "companion [[0, I], [-K, 2L]] vs diag(I, M), ARPACK shift-invert at sigma = " + std::to_string(sigma);
  const a_int converged = iparam[4];
  for (a_int i = 0; i < converged; ++i) {
    const Complex theta(dr[static_cast<std::size_t>(i)], di[static_cast<std::size_t>(i)]);
    if (theta == 0.0) continue;
    const Complex lambda = sigma + 1.0 / theta;
    // Ritz vector: real column, or (re, im) columns for a complex pair.
    Eigen::VectorXcd x(d);
    const Eigen::Map<const Eigen::VectorXd> c0(&z[static_cast<std::size_t>(i * n)], d);
    if (theta.imag() == 0.0) {
      x = c0.cast<Complex>();
    } else {
      const bool first = (i == 0) || di[static_cast<std::size_t>(i - 1)] != -theta.imag() ||
                         dr[static_cast<std::size_t>(i - 1)] != theta.real();
      const a_int re_col = first ? i : i - 1;
      const Eigen::Map<const Eigen::VectorXd> re(&z[static_cast<std::size_t>(re_col * n)], d);
      const Eigen::Map<const Eigen::VectorXd> im(&z[static_cast<std::size_t>((re_col + 1) * n)], d);
      x = re.cast<Complex>() + Complex(0.0, first ? 1.0 : -1.0) * im.cast<Complex>();
    }
    const Eigen::VectorXd xr = x.real(), xi = x.imag();
    const Eigen::VectorXcd kx = (K * xr).cast<Complex>() + Complex(0, 1) * (K * xi).cast<Complex>();
    const Eigen::VectorXcd lx = (L * xr).cast<Complex>() + Complex(0, 1) * (L * xi).cast<Complex>();
    const Eigen::VectorXcd mx = (M * xr).cast<Complex>() + Complex(0, 1) * (M * xi).cast<Complex>();
    const double res = (kx - 2.0 * lambda * lx + lambda * lambda * mx).norm() / x.norm();
    out.points.push_back({lambda, res, residual_tolerance(lambda, nk, nl, nm)});
  }
  return out;
}

double ground_shift(const fem::QuadraticPencil& pencil) {
  const Eigen::Index n = static_cast<Eigen::Index>(pencil.v_count);
  require(n > 0, ErrorKind::kPrecondition, "pencil has no interior v unknowns");
  const SparseMatrix k = pencil.K.topLeftCorner(n, n);
  const SparseMatrix m = pencil.M.topLeftCorner(n, n);
  Cholesky chol;
  factor(chol, k, "the scalar stiffness matrix");
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  double mu = 0.0;
  for (int it = 0; it < 1000; ++it) {
    Eigen::VectorXd y = chol.solve(m * x);
    const double ynorm = std::sqrt(y.dot(m * y));
    y /= ynorm;
    const double next = y.dot(k * y);
    x = y;
    if (it > 2 && std::abs(next - mu) <= 1e-13 * next) return std::sqrt(next);
    mu = next;
  }
  return std::sqrt(mu);
}

}  // namespace fracspec::spectral
