#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace fracspec::fem {

constexpr int kMaxOrder = 8;

/// Order-p Lagrange basis on the reference triangle (0,0), (1,0), (0,1) with
/// equispaced nodes (i/p, j/p), i + j <= p, listed with j outer and i inner.
class LagrangeBasis {
 public:
  explicit LagrangeBasis(int p);

  int order() const { return p_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  /// Node k as lattice indices (i, j); barycentric (p - i - j, i, j) / p.
  const std::array<int, 2>& lattice(int k) const { return nodes_[k]; }

  /// Values (rows: points, columns: basis functions) and reference gradients.
  void evaluate(const Eigen::MatrixX2d& points, Eigen::MatrixXd& values, Eigen::MatrixXd& d_dx,
                Eigen::MatrixXd& d_dy) const;

 private:
  int p_;
  std::vector<std::array<int, 2>> nodes_;
  std::vector<std::array<int, 2>> monomials_;
  Eigen::MatrixXd coefficients_;  // monomial coefficients, one column per basis function
};

}  // namespace fracspec::fem
