#pragma once

#include <string>
#include <vector>

#include "fracspec/spectral/qep.hpp"
#include "fracspec/types.hpp"

namespace fracspec::spectral {

/// Two-sided bounds for the eigenvalue omega in (a, b), from one point of
/// the second order spectrum inside the disk D(a, b).
struct Enclosure {
  double lower = 0.0, upper = 0.0;        // bounds for omega
  double sq_lower = 0.0, sq_upper = 0.0;  // bounds for omega^2
  Complex lambda;
  double a = 0.0, b = 0.0;
  double width() const { return upper - lower; }
  double sq_width() const { return sq_upper - sq_lower; }
  double sq_mid() const { return 0.5 * (sq_lower + sq_upper); }
};

/// True when |lambda - (a + b)/2| < (b - a)/2.
bool in_disk(Complex lambda, double a, double b);

/// Re l - Im^2/(b - Re l) <= omega <= Re l + Im^2/(Re l - a). Throws a
/// precondition error when lambda is outside D(a, b).
Enclosure enclosure_from_point(Complex lambda, double a, double b);

struct GroundSelection {
  Complex lambda;                     // representative with Im >= 0
  std::vector<std::string> warnings;  // e.g. more than one pair in the disk
};

/// Among the points of `spectrum` inside D(a, b) with Re > 0, the one with
/// the smallest |Im|. Conjugate pairs count once. Points failing their
/// residual check are skipped with a warning, as are points within
/// 1e-6 (b - a) of a, which belong to the kernel of the discrete operator.
/// Throws a numerical error when nothing is left.
GroundSelection select_ground_point(const SecondOrderSpectrum& spectrum, double a, double b);

/// 0.995 sqrt(j11^2): the default upper end of the disk.
double default_disk_end();

}  // namespace fracspec::spectral
