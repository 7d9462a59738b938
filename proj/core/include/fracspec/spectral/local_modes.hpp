#pragma once

#include <limits>
#include <vector>

namespace fracspec::spectral {

/// Angles (midpoints of `samples` equal cells of (0, alpha pi)) at which
/// local_mode_coefficients expects its samples.
std::vector<double> local_mode_angles(double alpha, int samples);

/// Coefficients a_1..a_count of the corner expansion
///   u(r, theta) = sum a_n J_{n/alpha}(omega r) sin(n theta / alpha)
/// from samples u(R, theta_i) at local_mode_angles. The midpoint sine
/// transform is exact for n < samples. Requires R < pi / (2 omega) and
/// R < neighbour_distance, the distance to the nearest other vertex.
std::vector<double> local_mode_coefficients(double alpha, double omega, double R, const std::vector<double>& samples,
                                            int count,
                                            double neighbour_distance = std::numeric_limits<double>::infinity());

}  // namespace fracspec::spectral
