#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace mmwmac {

// Adaptive 61-point Gauss-Kronrod on [a, b]. The integrands in this library
// are smooth and bounded on a finite interval.
template <class F>
double integrate(F&& f, double a, double b) {
  if (b <= a) return 0.0;
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, a, b, /*max_depth=*/15, /*tolerance=*/1e-13, &error);
}

}  // namespace mmwmac
