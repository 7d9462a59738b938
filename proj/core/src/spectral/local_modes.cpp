#include "fracspec/spectral/local_modes.hpp"

#include <cmath>
#include <numbers>

#include "fracspec/error.hpp"
#include "fracspec/spectral/bessel.hpp"

namespace fracspec::spectral {

std::vector<double> local_mode_angles(double alpha, int samples) {
  require(alpha > 0.0 && alpha <= 2.0, ErrorKind::kPrecondition, "corner angle fraction must be in (0, 2]");
  require(samples >= 2, ErrorKind::kPrecondition, "need at least two samples");
  std::vector<double> theta(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) theta[static_cast<std::size_t>(i)] = alpha * std::numbers::pi * (i + 0.5) / samples;
  return theta;
}

std::vector<double> local_mode_coefficients(double alpha, double omega, double R, const std::vector<double>& samples,
                                            int count, double neighbour_distance) {
  const int n_samples = static_cast<int>(samples.size());
  const std::vector<double> theta = local_mode_angles(alpha, n_samples);
  require(omega > 0.0 && R > 0.0, ErrorKind::kPrecondition, "omega and R must be positive");
  require(R < std::numbers::pi / (2.0 * omega), ErrorKind::kPrecondition, "R must be below pi / (2 omega)");
  require(R < neighbour_distance, ErrorKind::kPrecondition, "R must be below the distance to the next vertex");
  require(count >= 1 && count < n_samples, ErrorKind::kPrecondition, "need 1 <= count < number of samples");
  std::vector<double> a(static_cast<std::size_t>(count));
  for (int n = 1; n <= count; ++n) {
    double s = 0.0;
    for (int i = 0; i < n_samples; ++i)
      s += samples[static_cast<std::size_t>(i)] * std::sin(n * theta[static_cast<std::size_t>(i)] / alpha);
    // Midpoint rule for the integral over (0, alpha pi), cell alpha pi / N.
    const double integral = s * alpha * std::numbers::pi / n_samples;
    a[static_cast<std::size_t>(n - 1)] =
        2.0 * integral / (alpha * std::numbers::pi * bessel_j(n / alpha, omega * R));
  }
  return a;
}

}  // namespace fracspec::spectral
