#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace wgb {

using SpaceTimeFunction = std::function<double(double x, double t)>;

/// Raised when the coefficient integrand underflows for every x.
class UnsupportedViscosityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The series denominator has cancelled below 1e-12 a_0, so the value is noise.
class ExactEvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive Gauss-Legendre panel quadrature of f over [a, b] to absolute tolerance tol.
double adaptive_integrate(const std::function<double(double)>& f, double a, double b, double tol,
                          int initial_panels = 1);

/// Cole-Hopf series solution for u(x, 0) = sin(pi x):
///   u = 2 pi nu sum a_n E_n n sin(n pi x) / (a_0 + sum a_n E_n cos(n pi x)),  E_n = exp(-n^2 pi^2 nu t).
/// The coefficients are stored without the common factor exp(-1/(2 pi nu)),
/// which cancels in the ratio.
struct FourierSolution {
  double nu = 0.0;
  double tol = 0.0;
  Eigen::VectorXd a;  // a_0..a_K

  int truncation() const { return static_cast<int>(a.size()) - 1; }
  double operator()(double x, double t) const;
  double dx(double x, double t) const;
};

/// Coefficients a_0..a_K by adaptive quadrature to absolute tolerance tol.
FourierSolution fourier_coefficients(double nu, int K, double tol = 1e-13);

/// Picks K >= 20 so the first dropped term bound 2 pi nu K a_K exp(-K^2 pi^2 nu t_min) is below 1e-14.
FourierSolution fourier_solution(double nu, double t_min, double tol = 1e-13);

/// Throws std::invalid_argument for t <= 0 and ExactEvaluationError when the
/// denominator falls below 1e-12 a_0.
double fourier_eval(const FourierSolution& sol, double x, double t);

/// Closed-form solution for u(x, 0) = 2 nu pi sin(pi x) / (sigma + cos(pi x)), sigma > 1.
struct WoodSolution {
  WoodSolution(double nu, double sigma);

  double nu;
  double sigma;

  double operator()(double x, double t) const;
  double dx(double x, double t) const;
  double initial(double x) const;
};

double wood_eval(const WoodSolution& sol, double x, double t);

/// max |u_t + u u_x - nu u_xx| over the samples, derivatives by central differences with spacing delta.
double pde_residual(const SpaceTimeFunction& u, double nu, const std::vector<std::pair<double, double>>& samples,
                    double delta);

}  // namespace wgb
