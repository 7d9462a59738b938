#include "fracspec/fem/lagrange.hpp"

#include <cmath>

#include "fracspec/error.hpp"

namespace fracspec::fem {

LagrangeBasis::LagrangeBasis(int p) : p_(p) {
  require(p >= 1 && p <= kMaxOrder, ErrorKind::kConfig, "element order must be in [1, 8]");
  for (int j = 0; j <= p; ++j)
    for (int i = 0; i + j <= p; ++i) nodes_.push_back({i, j});
  for (int d = 0; d <= p; ++d)
    for (int b = 0; b <= d; ++b) monomials_.push_back({d - b, b});
  const int n = size();
  Eigen::MatrixXd vandermonde(n, n);
  for (int k = 0; k < n; ++k) {
    // Monomials in coordinates centred on the triangle keep the system well conditioned.
    const double x = static_cast<double>(nodes_[k][0]) / p - 1.0 / 3.0;
    const double y = static_cast<double>(nodes_[k][1]) / p - 1.0 / 3.0;
    for (int m = 0; m < n; ++m) vandermonde(k, m) = std::pow(x, monomials_[m][0]) * std::pow(y, monomials_[m][1]);
  }
  coefficients_ = vandermonde.fullPivLu().inverse();
}

void LagrangeBasis::evaluate(const Eigen::MatrixX2d& points, Eigen::MatrixXd& values, Eigen::MatrixXd& d_dx,
                             Eigen::MatrixXd& d_dy) const {
  const int n = size();
  const Eigen::Index q = points.rows();
  Eigen::MatrixXd mono(q, n), mono_x(q, n), mono_y(q, n);
  std::array<double, kMaxOrder + 2> px{}, py{};
  for (Eigen::Index r = 0; r < q; ++r) {
    const double x = points(r, 0) - 1.0 / 3.0, y = points(r, 1) - 1.0 / 3.0;
    px[0] = py[0] = 1.0;
    for (int e = 1; e <= p_; ++e) {
      px[e] = px[e - 1] * x;
      py[e] = py[e - 1] * y;
    }
    for (int m = 0; m < n; ++m) {
      const int a = monomials_[m][0], b = monomials_[m][1];
      mono(r, m) = px[a] * py[b];
      mono_x(r, m) = a > 0 ? a * px[a - 1] * py[b] : 0.0;
      mono_y(r, m) = b > 0 ? b * px[a] * py[b - 1] : 0.0;
    }
  }
  values.noalias() = mono * coefficients_;
  d_dx.noalias() = mono_x * coefficients_;
  d_dy.noalias() = mono_y * coefficients_;
}

}  // namespace fracspec::fem
