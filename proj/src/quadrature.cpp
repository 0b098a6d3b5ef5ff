#include "wgb/quadrature.hpp"

#include "wgb/legendre.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wgb {

QuadratureRule gauss_rule(int n_points) {
  if (n_points < 1 || n_points > kMaxGaussPoints) {
    throw std::invalid_argument("gauss_rule: point count " + std::to_string(n_points) +
                                " outside [1, " + std::to_string(kMaxGaussPoints) + "]");
  }
  const int n = n_points;
  QuadratureRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);

  // Roots are symmetric; solve for the nonnegative half and mirror.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      auto [p, d] = legendre_with_derivative(n, x);
      dp = d;
      const double dx = p / d;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    dp = legendre_with_derivative(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.points(i) = -x;
    rule.points(n - 1 - i) = x;
    rule.weights(i) = w;
    rule.weights(n - 1 - i) = w;
  }
  if (n % 2 == 1) rule.points(n / 2) = 0.0;
  return rule;
}

}  // namespace wgb
