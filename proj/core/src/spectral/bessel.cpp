#include "fracspec/spectral/bessel.hpp"

#include <cmath>

#include "fracspec/error.hpp"

namespace fracspec::spectral {
namespace {

using Quad = __float128;

Quad quad_abs(Quad x) { return x < 0 ? -x : x; }

}  // namespace

double bessel_j(double nu, double x) {
  require(nu >= 0.0, ErrorKind::kPrecondition, "bessel order must be nonnegative");
  require(x >= 0.0 && x <= 30.0, ErrorKind::kPrecondition, "bessel argument outside [0, 30]");
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  // Leading term (x/2)^nu / Gamma(nu + 1), then the ratio recurrence; the
  // prefactor only needs double precision because it scales the whole sum.
  const double lead = std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0));
  const Quad q = static_cast<Quad>(x) * static_cast<Quad>(x) / 4;
  Quad term = 1, sum = 1;
  for (int l = 1; l < 400; ++l) {
    term *= -q / (static_cast<Quad>(l) * (static_cast<Quad>(nu) + l));
    sum += term;
    if (quad_abs(term) < 1e-34 * quad_abs(sum) && static_cast<Quad>(l) > q) break;
  }
  return lead * static_cast<double>(sum);
}

double bessel_zero(double nu, int k) {
  require(k >= 1, ErrorKind::kPrecondition, "zero index starts at 1");
  // Scan with a step below half the zero spacing (which exceeds pi/2 for nu >= 0).
  const double step = 0.25;
  double lo = (nu == 0.0) ? 1e-3 : nu * 0.5 + 1e-3;
  double f_lo = bessel_j(nu, lo);
  int found = 0;
  for (double hi = lo + step; hi <= 30.0; hi += step) {
    const double f_hi = bessel_j(nu, hi);
    if ((f_lo > 0) != (f_hi > 0)) {
      if (++found == k) {
        double a = lo, b = hi, fa = f_lo;
        while (b - a > 1e-15 * b) {
          const double m = 0.5 * (a + b);
          if (m <= a || m >= b) break;
          const double fm = bessel_j(nu, m);
          if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
          } else {
            b = m;
          }
        }
        return 0.5 * (a + b);
      }
    }
    lo = hi;
    f_lo = f_hi;
  }
  fail(ErrorKind::kPrecondition, "requested bessel zero lies beyond x = 30");
}

const DiskConstants& disk_constants() {
  static const DiskConstants constants = [] {
    const double j01 = bessel_zero(0.0, 1), j11 = bessel_zero(1.0, 1);
    return DiskConstants{j01 * j01, j11 * j11};
  }();
  return constants;
}

}  // namespace fracspec::spectral
