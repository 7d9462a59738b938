#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fracspec/geometry/polygon.hpp"

namespace fracspec::conformal {

/// A prescribed prevertex: vertex `index` of the target maps from `prevertex`.
struct FixedPrevertex {
  std::size_t index = 0;
  Complex prevertex;
};

/// Solved Schwarz-Christoffel data for the map from the unit disk,
///
///   g(xi) = A + C * integral_0^xi prod_k (1 - zeta / xi_k)^(alpha_k - 1) dzeta.
///
/// The target polygon is m-fold symmetric about the origin and the solver
/// only tracks one sector of n / m prevertices; the others are rotations by
/// 2 pi / m. Angles are stored as an offset plus accurate gaps, because
/// prevertices can crowd far below the resolution of absolute angles.
struct PrevertexSolution {
  std::vector<Point> vertices;        // target vertices w_k
  std::vector<double> exponents;      // alpha_k - 1
  double theta0 = 0.0;                // argument of prevertex 0
  std::vector<double> gaps;           // gaps[k] = theta_{k+1} - theta_k, all n of them
  Complex C;
  Complex A;
  std::vector<std::size_t> fixed_indices;
  int symmetry = 1;  // m
  double residual = 0.0;               // max relative side-length residual
  std::vector<double> residual_history;

  std::size_t size() const { return vertices.size(); }
  std::size_t sector_size() const { return vertices.size() / static_cast<std::size_t>(symmetry); }
  /// theta_k, accumulated from theta0.
  std::vector<double> angles() const;
  std::vector<Complex> prevertices() const;
  Complex prevertex(std::size_t k) const;
};

struct SolverOptions {
  double tolerance = 1e-11;    // target relative side-length residual
  int max_iterations = 20000;
  double relaxation = 0.75;    // exponent applied to the Davis side ratios
  int nodes = 24;              // Gauss nodes per quadrature piece
  double crowding_limit = 1e-13;
};

/// Fixed prevertices for an m-fold symmetric polygon: vertices k * n / m go
/// to the unit-circle points in the directions of the vertices themselves.
std::vector<FixedPrevertex> symmetric_fixed_prevertices(const geometry::Polygon& target, int m);

/// Solves the parameter problem by Davis' iteration on the gaps of one
/// symmetry sector. The fixed prevertices must be equally spaced, match the
/// directions of their vertices and be mapped onto each other by the rotation
/// that maps the polygon onto itself. Throws a numerical error carrying the
/// residual history on non-convergence and on crowding.
PrevertexSolution solve_parameter_problem(const geometry::Polygon& target, const std::vector<FixedPrevertex>& fixed,
                                          const SolverOptions& options = {});

/// Side lengths |w_{k+1} - w_k| of the solved map computed from arc integrals
/// of |g'| between consecutive prevertices with `nodes` Gauss points per
/// piece. Used for residual checks.
std::vector<double> side_lengths(const PrevertexSolution& sol, int nodes = 24);

/// Integrand prod_k (1 - zeta / xi_k)^(alpha_k - 1) without C (principal branches).
Complex sc_integrand(const PrevertexSolution& sol, Complex zeta);

/// g'(xi) = C * sc_integrand.
inline Complex sc_derivative(const PrevertexSolution& sol, Complex xi) { return sol.C * sc_integrand(sol, xi); }

/// Integrand at xi_k + d near prevertex k, with the factor of xi_k evaluated
/// without cancellation for tiny d.
Complex sc_integrand_near(const PrevertexSolution& sol, std::size_t k, Complex d);

/// |g'(xi)| for xi = xi_k * (1 + v) near prevertex k, accurate for tiny v.
double sc_derivative_abs_near(const PrevertexSolution& sol, std::size_t k, Complex v);

/// Integral of the integrand along the straight segment [a, b] in the closed
/// disk. `a_prevertex` / `b_prevertex` name prevertex endpoints (or -1) so
/// that the endpoint singularities are absorbed by Gauss-Jacobi rules.
Complex sc_segment_integral(const PrevertexSolution& sol, Complex a, Complex b, long a_prevertex = -1,
                            long b_prevertex = -1, int nodes = 24);

/// Integral from a to a + d, exact in d; a is not a prevertex.
Complex sc_step_integral(const PrevertexSolution& sol, Complex a, Complex d, int nodes = 24);

/// Integral from prevertex k to xi_k + d, exact in d even when d is far
/// below the resolution of xi_k.
Complex sc_integral_from_prevertex(const PrevertexSolution& sol, std::size_t k, Complex d, int nodes = 24);

/// g(xi) for |xi| <= 1, integrating from the nearest of the centre and the
/// prevertices.
Point sc_evaluate(const PrevertexSolution& sol, Complex xi);

/// Map serialization: {prevertices (arguments, radians), gaps, exponents,
/// vertices, C, A, fixed_indices, symmetry, residual}.
std::string map_to_json(const PrevertexSolution& sol);
PrevertexSolution map_from_json(const std::string& text);

}  // namespace fracspec::conformal
