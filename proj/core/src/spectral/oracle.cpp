#include "fracspec/spectral/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace fracspec::spectral {

BlockOracleReport block_operator_oracle(const Eigen::MatrixXd& T, double tolerance, double rank_tolerance) {
  const Eigen::Index m = T.rows(), n = T.cols();
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(m + n, m + n);
  E.topRightCorner(n, m) = T.transpose();
  E.bottomLeftCorner(m, n) = T;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(E, Eigen::EigenvaluesOnly);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(T);

  BlockOracleReport r;
  r.eigenvalues.assign(eig.eigenvalues().data(), eig.eigenvalues().data() + eig.eigenvalues().size());
  const Eigen::VectorXd& s = svd.singularValues();
  r.singular_values.assign(s.data(), s.data() + s.size());
  const double scale = std::max(1.0, s.size() > 0 ? s(0) : 0.0);
  const double zero = rank_tolerance * scale;

  std::size_t rank = 0;
  for (double v : r.singular_values)
    if (v > zero) ++rank;
  r.kernel_dim = static_cast<std::size_t>(n) - rank;
  r.cokernel_dim = static_cast<std::size_t>(m) - rank;
  for (double v : r.eigenvalues)
    if (std::abs(v) <= zero) ++r.zero_multiplicity;

  // Nonzero eigenvalues, split by sign, against the nonzero singular values.
  std::vector<double> positive, negative;
  for (double v : r.eigenvalues) {
    if (v > zero) positive.push_back(v);
    if (v < -zero) negative.push_back(-v);
  }
  std::sort(positive.rbegin(), positive.rend());
  std::sort(negative.rbegin(), negative.rend());
  r.pairing_ok = positive.size() == rank && negative.size() == rank;
  for (std::size_t i = 0; r.pairing_ok && i < rank; ++i)
    r.pairing_error = std::max({r.pairing_error, std::abs(positive[i] - s(static_cast<Eigen::Index>(i))),
                                std::abs(negative[i] - s(static_cast<Eigen::Index>(i)))});
  r.pairing_ok = r.pairing_ok && r.pairing_error <= tolerance * scale;
  r.multiplicity_ok = r.zero_multiplicity == r.kernel_dim + r.cokernel_dim;
  return r;
}

}  // namespace fracspec::spectral
