#pragma once

#include <vector>

namespace fracspec {

/// Nodes and weights of a one-dimensional rule on [-1, 1].
struct Rule1d {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Jacobi rule for the weight (1 - x)^a (1 + x)^b, a, b > -1, built by
/// the Golub-Welsch eigenvalue method and polished with Newton steps on the
/// Jacobi polynomial. Rules are cached; the returned reference stays valid.
const Rule1d& gauss_jacobi(int n, double a, double b);

inline const Rule1d& gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

}  // namespace fracspec
