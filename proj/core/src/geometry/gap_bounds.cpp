#include "fracspec/geometry/gap_bounds.hpp"

#include <cmath>

#include "fracspec/error.hpp"
#include "fracspec/spectral/bessel.hpp"
#include "fracspec/types.hpp"

namespace fracspec::geometry {

double pang_constant(double area_outer, double inradius_inner) {
  require(area_outer > 0.0 && inradius_inner > 0.0, ErrorKind::kPrecondition,
          "area and inradius must be positive");
  const double lambda = spectral::disk_constants().j01_sq;
  return std::pow(2.0, 9) * std::pow(lambda, 4) * std::pow(area_outer, 2.25) /
         (3.0 * std::pow(kPi, 2.25) * std::pow(inradius_inner, 7));
}

GapBound koch_gap_bound(int j) {
  require(j >= 0, ErrorKind::kPrecondition, "level must be nonnegative");
  const double lambda = spectral::disk_constants().j01_sq;
  const double base = std::pow(lambda, 4) * std::pow(3.0, 0.75) / (std::pow(2.0, 1.25) * std::pow(kPi, 2.25));
  return {pang_constant(1.5 * std::sqrt(3.0), 1.0), base * std::pow(3.0, -0.5 * j), j};
}

GapBound general_gap_bound(double C, double delta, double beta0, double ell_j, int level) {
  require(C > 0.0 && delta > 0.0 && ell_j > 0.0, ErrorKind::kPrecondition,
          "constant, delta and side length must be positive");
  require(beta0 > kPi && beta0 < 2 * kPi, ErrorKind::kPrecondition, "beta0 must lie in (pi, 2 pi)");
  return {C, C * std::sqrt(2.0 * delta) / std::sqrt(std::sin(0.5 * beta0)) * std::sqrt(ell_j), level};
}

}  // namespace fracspec::geometry
