#include "wgb/legendre.hpp"

namespace wgb {

double RefPoly::operator()(double t) const {
  return legendre_all(degree(), t).dot(coeffs);
}

double RefPoly::derivative(double t) const {
  double d = 0.0;
  for (int j = 1; j <= degree(); ++j) d += coeffs(j) * legendre_with_derivative(j, t).second;
  return d;
}

}  // namespace wgb
