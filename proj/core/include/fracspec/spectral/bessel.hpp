#pragma once

namespace fracspec::spectral {

/// Bessel function of the first kind from its Maclaurin series, summed in
/// quad precision so that the cancellation at large x stays below 1e-13.
/// Valid for nu >= 0 and 0 <= x <= 30; throws a precondition error otherwise.
double bessel_j(double nu, double x);

/// k-th positive zero of J_nu (k >= 1) by bracketed bisection on the series.
double bessel_zero(double nu, int k);

struct DiskConstants {
  double j01_sq = 0.0;  // first Dirichlet eigenvalue of the unit disk
  double j11_sq = 0.0;  // second one
};

/// Squares of the first zeros of J_0 and J_1, computed once and cached.
const DiskConstants& disk_constants();

}  // namespace fracspec::spectral
