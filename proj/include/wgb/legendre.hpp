#pragma once

#include <Eigen/Dense>

#include <utility>

namespace wgb {

/// Legendre polynomial P_n(t) by the three-term recurrence.
template <typename Scalar>
Scalar legendre(int degree, Scalar t) {
  if (degree <= 0) return Scalar(1);
  Scalar p0(1), p1 = t;
  for (int n = 1; n < degree; ++n) {
    Scalar p2 = ((2 * n + 1) * t * p1 - n * p0) / Scalar(n + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

/// Value and derivative (P_n(t), P_n'(t)). The derivative uses
/// P_n' = sum over j < n with n - j odd of (2j+1) P_j, which stays finite at t = +-1.
template <typename Scalar>
std::pair<Scalar, Scalar> legendre_with_derivative(int degree, Scalar t) {
  if (degree <= 0) return {Scalar(1), Scalar(0)};
  Scalar p0(1), p1 = t;
  Scalar d0(0), d1(1);
  for (int n = 1; n < degree; ++n) {
    Scalar p2 = ((2 * n + 1) * t * p1 - n * p0) / Scalar(n + 1);
    // (n+1) P_{n+1}' = (2n+1)(P_n + t P_n') - n P_{n-1}'
    Scalar d2 = ((2 * n + 1) * (p1 + t * d1) - n * d0) / Scalar(n + 1);
    p0 = p1;
    p1 = p2;
    d0 = d1;
    d1 = d2;
  }
  return {p1, d1};
}

/// Values P_0(t)..P_degree(t).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> legendre_all(int degree, Scalar t) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v(degree + 1);
  v(0) = Scalar(1);
  if (degree >= 1) v(1) = t;
  for (int n = 1; n < degree; ++n) {
    v(n + 1) = ((2 * n + 1) * t * v(n) - n * v(n - 1)) / Scalar(n + 1);
  }
  return v;
}

/// A polynomial on the reference interval [-1,1] stored by its Legendre
/// coefficients. On a mesh element the same coefficients describe the
/// polynomial composed with the affine map to [-1,1].
struct RefPoly {
  Eigen::VectorXd coeffs;

  RefPoly() = default;
  explicit RefPoly(Eigen::VectorXd c) : coeffs(std::move(c)) {}
  static RefPoly zero(int degree) { return RefPoly(Eigen::VectorXd::Zero(degree + 1)); }

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  double operator()(double t) const;
  double derivative(double t) const;  // d/dt on the reference interval
};

}  // namespace wgb
