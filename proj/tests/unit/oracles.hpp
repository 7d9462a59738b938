// Independent reference computations for the unit tests. Nothing here calls
// into the library, so a test comparing against these is a real cross-check.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using Pt = std::complex<double>;

inline double shoelace_area(const std::vector<Pt>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Pt a = v[i], b = v[(i + 1) % v.size()];
    s += a.real() * b.imag() - b.real() * a.imag();
  }
  return 0.5 * s;
}

// Winding number by summing signed angles; robust enough away from edges.
inline int winding_number(const std::vector<Pt>& v, Pt p) {
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) total += std::arg((v[(i + 1) % v.size()] - p) / (v[i] - p));
  return static_cast<int>(std::lround(total / (2.0 * M_PI)));
}

inline bool inside(const std::vector<Pt>& v, Pt p) { return winding_number(v, p) != 0; }

// Proper crossing of two segments by orientation signs.
inline bool segments_cross(Pt a, Pt b, Pt c, Pt d) {
  auto orient = [](Pt p, Pt q, Pt r) { return (q - p).real() * (r - p).imag() - (q - p).imag() * (r - p).real(); };
  const double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

inline bool any_edges_cross(const std::vector<Pt>& p, const std::vector<Pt>& q) {
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t k = 0; k < q.size(); ++k)
      if (segments_cross(p[i], p[(i + 1) % p.size()], q[k], q[(k + 1) % q.size()])) return true;
  return false;
}

// Adaptive Simpson on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol, int depth = 40) {
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double l, double r, double fl, double fm, double fr, double whole, int d) {
        const double m = 0.5 * (l + r), lm = 0.5 * (l + m), rm = 0.5 * (m + r);
        const double flm = f(lm), frm = f(rm);
        const double left = (m - l) / 6.0 * (fl + 4 * flm + fm), right = (r - m) / 6.0 * (fm + 4 * frm + fr);
        if (d <= 0 || std::abs(left + right - whole) <= 15 * tol) return left + right + (left + right - whole) / 15.0;
        return rec(l, m, fl, flm, fm, left, d - 1) + rec(m, r, fm, frm, fr, right, d - 1);
      };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4 * fm + fb), depth);
}

// Root of f in [a, b] by bisection; f(a) and f(b) must differ in sign.
inline double bisect(const std::function<double(double)>& f, double a, double b, double tol = 1e-15) {
  double fa = f(a);
  for (int it = 0; it < 200 && b - a > tol; ++it) {
    const double m = 0.5 * (a + b), fm = f(m);
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Bessel J_n for integer n from Bessel's integral (1/2pi) int_{-pi}^{pi} cos(n t - x sin t) dt.
// The integrand is smooth and periodic, so the trapezoid rule converges
// geometrically.
inline double bessel_integral(int n, double x, int points = 256) {
  double s = 0.0;
  for (int k = 0; k < points; ++k) {
    const double t = -M_PI + 2.0 * M_PI * k / points;
    s += std::cos(n * t - x * std::sin(t));
  }
  return s / points;
}

}  // namespace oracle
