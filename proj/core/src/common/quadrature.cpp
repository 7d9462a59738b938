#include "fracspec/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "fracspec/error.hpp"

namespace fracspec {
namespace {

// P_n^{(a,b)}(x) and its derivative by the three-term recurrence.
std::pair<double, double> jacobi_poly(int n, double a, double b, double x) {
  double p0 = 1.0, p1 = 0.5 * (a - b + (a + b + 2.0) * x);
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double c = 2.0 * k + a + b;
    const double a1 = 2.0 * k * (k + a + b) * (c - 2.0);
    const double a2 = (c - 1.0) * (a * a - b * b);
    const double a3 = (c - 2.0) * (c - 1.0) * c;
    const double a4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c;
    const double p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
    p0 = p1;
    p1 = p2;
  }
  const double c = 2.0 * n + a + b;
  const double dp = (n * (a - b - c * x) * p1 + 2.0 * (n + a) * (n + b) * p0) / (c * (1.0 - x * x));
  return {p1, dp};
}

Rule1d build(int n, double a, double b) {
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) {
    const double c = 2.0 * k + a + b;
    diag(k) = (k == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (c * (c + 2.0));
    if (k + 1 < n) {
      const double kk = k + 1.0, ck = 2.0 * kk + a + b;
      sub(k) = std::sqrt(4.0 * kk * (kk + a) * (kk + b) * (kk + a + b) / (ck * ck * (ck + 1.0) * (ck - 1.0)));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  const double mu0 = std::exp((a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                              std::lgamma(a + b + 2.0));
  Rule1d rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    double x = eig.eigenvalues()(k);
    for (int it = 0; it < 3; ++it) {
      const auto [p, dp] = jacobi_poly(n, a, b, x);
      if (dp == 0.0) break;
      x -= p / dp;
    }
    rule.nodes[k] = x;
    // Weight from the derivative formula, which keeps full relative accuracy
    // even for weights near the endpoints.
    const auto [p, dp] = jacobi_poly(n, a, b, x);
    (void)p;
    const double log_c = (a + b + 1.0) * std::log(2.0) + std::lgamma(n + a + 1.0) + std::lgamma(n + b + 1.0) -
                         std::lgamma(n + a + b + 1.0) - std::lgamma(n + 1.0);
    rule.weights[k] = std::exp(log_c) / ((1.0 - x * x) * dp * dp);
  }
  // Fall back to Golub-Welsch weights if the closed form went wrong (tiny n).
  double total = 0.0;
  for (double w : rule.weights) total += w;
  if (!(std::abs(total - mu0) < 1e-10 * mu0)) {
    for (int k = 0; k < n; ++k) rule.weights[k] = mu0 * eig.eigenvectors()(0, k) * eig.eigenvectors()(0, k);
  }
  return rule;
}

}  // namespace

const Rule1d& gauss_jacobi(int n, double a, double b) {
  require(n >= 1, ErrorKind::kPrecondition, "quadrature needs at least one node");
  require(a > -1.0 && b > -1.0, ErrorKind::kPrecondition, "Jacobi exponents must exceed -1");
  static std::mutex mutex;
  static std::map<std::tuple<int, double, double>, std::unique_ptr<Rule1d>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{n, a, b}];
  if (!slot) slot = std::make_unique<Rule1d>(build(n, a, b));
  return *slot;
}

}  // namespace fracspec
