#pragma once

#include <complex>
#include <numbers>

namespace fracspec {

/// Points in the plane are complex numbers; rotations and the conformal maps
/// both read naturally that way.
using Complex = std::complex<double>;
using Point = Complex;

inline constexpr double kPi = std::numbers::pi;

inline double cross(Point a, Point b) { return a.real() * b.imag() - a.imag() * b.real(); }
inline double dot(Point a, Point b) { return a.real() * b.real() + a.imag() * b.imag(); }

}  // namespace fracspec
