#pragma once

#include "fracspec/types.hpp"

namespace fracspec::conformal::detail {

// ((1 + v)^m - 1) / v, by Horner on the binomial coefficients.
inline Complex binomial_quotient(Complex v, int m) {
  Complex acc = 0.0;
  double c = 1.0;  // C(m, i), built downwards from i = m
  for (int i = m; i >= 1; --i) {
    acc = acc * v + c;
    c = c * i / (m - i + 1);
  }
  return acc;
}

}  // namespace fracspec::conformal::detail
