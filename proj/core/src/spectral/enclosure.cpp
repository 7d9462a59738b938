#include "fracspec/spectral/enclosure.hpp"

#include <cmath>

#include "fracspec/error.hpp"
#include "fracspec/spectral/bessel.hpp"

namespace fracspec::spectral {

bool in_disk(Complex lambda, double a, double b) { return std::abs(lambda - 0.5 * (a + b)) < 0.5 * (b - a); }

Enclosure enclosure_from_point(Complex lambda, double a, double b) {
  require(a >= 0.0 && a < b, ErrorKind::kPrecondition, "disk needs 0 <= a < b");
  require(in_disk(lambda, a, b), ErrorKind::kPrecondition,
          "spectrum point " + fmt_sci(lambda.real()) + (lambda.imag() < 0 ? " - " : " + ") +
              fmt_sci(std::abs(lambda.imag())) + "i is outside the disk D(" + fmt_sci(a) + ", " + fmt_sci(b) + ")");
  const double re = lambda.real(), im2 = lambda.imag() * lambda.imag();
  Enclosure e;
  e.lambda = lambda;
  e.a = a;
  e.b = b;
  e.lower = re - im2 / (b - re);
  e.upper = re + im2 / (re - a);
  e.sq_lower = e.lower * e.lower;
  e.sq_upper = e.upper * e.upper;
  return e;
}

GroundSelection select_ground_point(const SecondOrderSpectrum& spectrum, double a, double b) {
  require(a >= 0.0 && a < b, ErrorKind::kPrecondition, "disk needs 0 <= a < b");
  GroundSelection out;
  const double kernel = 1e-6 * (b - a);
  std::vector<Complex> pairs;  // Im >= 0 representatives already seen
  std::size_t unresolved = 0;
  for (const SpectrumPoint& p : spectrum.points) {
    const Complex l(p.lambda.real(), std::abs(p.lambda.imag()));
    if (!(l.real() > 0.0) || !in_disk(l, a, b) || std::abs(l - a) <= kernel) continue;
    if (!p.residual_ok()) {
      ++unresolved;
      continue;
    }
    bool seen = false;
    for (const Complex& q : pairs)
      if (std::abs(q - l) <= 1e-9 * std::abs(l)) seen = true;
    if (!seen) pairs.push_back(l);
  }
  if (unresolved > 0)
    out.warnings.push_back(std::to_string(unresolved) + " point(s) in the disk failed the residual check and were skipped");
  require(!pairs.empty(), ErrorKind::kNumerical,
          "no spectrum point in the disk D(" + fmt_sci(a) + ", " + fmt_sci(b) + "); mesh too coarse?");
  std::size_t best = 0;
  for (std::size_t i = 1; i < pairs.size(); ++i)
    if (pairs[i].imag() < pairs[best].imag()) best = i;
  if (pairs.size() > 1)
    out.warnings.push_back(std::to_string(pairs.size()) +
                           " conjugate pairs in the disk; the single eigenvalue hypothesis may be violated");
  out.lambda = pairs[best];
  return out;
}

double default_disk_end() { return 0.995 * std::sqrt(disk_constants().j11_sq); }

}  // namespace fracspec::spectral
