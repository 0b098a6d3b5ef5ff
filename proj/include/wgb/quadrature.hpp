#pragma once

#include <Eigen/Dense>

namespace wgb {

/// Gauss-Legendre rule on [-1,1].
struct QuadratureRule {
  Eigen::VectorXd points;
  Eigen::VectorXd weights;

  int size() const { return static_cast<int>(points.size()); }
  int exact_degree() const { return 2 * size() - 1; }
};

inline constexpr int kMaxGaussPoints = 64;

/// n-point Gauss-Legendre rule, 1 <= n <= 64. Nodes by Newton iteration on P_n.
/// Throws std::invalid_argument for n out of range.
QuadratureRule gauss_rule(int n_points);

}  // namespace wgb
