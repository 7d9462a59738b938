#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace fracspec::spectral {

/// Checks on E = [[0, T^T], [T, 0]] against the singular values of T.
struct BlockOracleReport {
  std::vector<double> eigenvalues;      // of E, ascending
  std::vector<double> singular_values;  // of T, descending, min(m, n) of them
  double pairing_error = 0.0;           // max | |eig| - sigma | over the nonzero pairs
  std::size_t zero_multiplicity = 0;    // eigenvalues of E within the rank tolerance of 0
  std::size_t kernel_dim = 0;           // dim ker T
  std::size_t cokernel_dim = 0;         // dim ker T^T
  bool pairing_ok = false;
  bool multiplicity_ok = false;
  bool passed() const { return pairing_ok && multiplicity_ok; }
};

/// `tolerance` bounds the pairing error; values below rank_tolerance
/// times max(1, |T|) count as zero.
BlockOracleReport block_operator_oracle(const Eigen::MatrixXd& T, double tolerance = 1e-10,
                                        double rank_tolerance = 1e-10);

}  // namespace fracspec::spectral
