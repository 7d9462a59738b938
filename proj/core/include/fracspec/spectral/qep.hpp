#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fracspec/fem/assembly.hpp"
#include "fracspec/types.hpp"

namespace fracspec::spectral {

using fem::SparseMatrix;

struct SpectrumPoint {
  Complex lambda;
  double residual = 0.0;   // |Q(lambda) x| / |x| for the computed eigenvector
  double tolerance = 0.0;  // 1e-8 (|K| + |lambda| |L| + |lambda|^2 |M|)
  bool residual_ok() const { return residual <= tolerance; }
};

/// Points of the second order spectrum, det Q(lambda) = 0.
struct SecondOrderSpectrum {
  std::vector<SpectrumPoint> points;
  std::string linearization;
};

/// All 2d eigenvalues of the companion pencil
///   [[0, I], [-K, 2L]] z = lambda [[I, 0], [0, M]] z,
/// with the residual |Q(lambda) x| / |x| of the computed eigenvector. Dense,
/// meant for d up to a few hundred.
SecondOrderSpectrum solve_qep(const SparseMatrix& K, const SparseMatrix& L, const SparseMatrix& M);
inline SecondOrderSpectrum solve_qep(const fem::QuadraticPencil& p) { return solve_qep(p.K, p.L, p.M); }

struct ShiftInvertOptions {
  int count = 6;        // eigenvalues requested around the shift
  int subspace = 40;
  double tolerance = 1e-14;
  int max_iterations = 3000;
};

/// The `count` spectrum points nearest the real shift sigma, from ARPACK on
/// the shift-inverted companion pencil. Each operator application is one
/// sparse Cholesky solve with Q(sigma), which is positive definite for real
/// sigma off the spectrum. If the factorization breaks down, sigma is
/// raised by 1e-3, 2e-3, ... 1.6e-2 relative.
SecondOrderSpectrum solve_qep_near(const fem::QuadraticPencil& pencil, double sigma,
                                   const ShiftInvertOptions& options = {});

/// sqrt of the smallest eigenvalue of the weighted scalar problem
/// grad v . grad v~ = mu |f'|^2 v v~ (the v-v blocks of K and M), by inverse
/// iteration. This is the Galerkin approximation of omega_1 used as shift.
double ground_shift(const fem::QuadraticPencil& pencil);

}  // namespace fracspec::spectral
