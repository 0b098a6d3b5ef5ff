#include "wgb/exact.hpp"

#include "wgb/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace wgb {

namespace {

constexpr double kPi = std::numbers::pi;

const QuadratureRule& panel_rule() {
  static const QuadratureRule rule = gauss_rule(20);
  return rule;
}

double panel(const std::function<double(double)>& f, double a, double b) {
  const QuadratureRule& rule = panel_rule();
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double s = 0.0;
  for (int q = 0; q < rule.size(); ++q) s += rule.weights(q) * f(mid + half * rule.points(q));
  return s * half;
}

double refine(const std::function<double(double)>& f, double a, double b, double whole, double tol, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = panel(f, a, mid), right = panel(f, mid, b);
  if (std::abs(left + right - whole) <= tol || depth >= 40) return left + right;
  return refine(f, a, mid, left, 0.5 * tol, depth + 1) + refine(f, mid, b, right, 0.5 * tol, depth + 1);
}

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double a, double b, double tol,
                          int initial_panels) {
  const int n = std::max(1, initial_panels);
  const double width = (b - a) / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double lo = a + i * width, hi = (i + 1 == n) ? b : lo + width;
    s += refine(f, lo, hi, panel(f, lo, hi), tol / n, 0);
  }
  return s;
}

FourierSolution fourier_coefficients(double nu, int K, double tol) {
  if (!(nu > 0.0)) throw std::invalid_argument("fourier_coefficients: nu must be > 0");
  if (K < 1) throw std::invalid_argument("fourier_coefficients: K must be >= 1");
  const double inv = 1.0 / (2.0 * kPi * nu);
  // exp((cos(pi x) - 1) / (2 pi nu)): the largest exponent, at x = 0, is factored out
  auto weight = [inv](double x) { return std::exp((std::cos(kPi * x) - 1.0) * inv); };

  FourierSolution sol;
  sol.nu = nu;
  sol.tol = tol;
  sol.a.resize(K + 1);
  for (int n = 0; n <= K; ++n) {
    auto integrand = [&weight, n](double x) { return weight(x) * std::cos(n * kPi * x); };
    const double integral = adaptive_integrate(integrand, 0.0, 1.0, tol, 1 + n / 4);
    sol.a(n) = (n == 0) ? integral : 2.0 * integral;
  }
  if (!(sol.a(0) > 0.0) || !std::isnormal(sol.a(0))) {
    throw UnsupportedViscosityError("fourier_coefficients: coefficient integrand underflows for nu = " +
                                    std::to_string(nu));
  }
  return sol;
}

FourierSolution fourier_solution(double nu, double t_min, double tol) {
  if (!(t_min > 0.0)) throw std::invalid_argument("fourier_solution: t_min must be > 0");
  int K = 20;
  for (;;) {
    FourierSolution sol = fourier_coefficients(nu, K, tol);
    const double bound =
        2.0 * kPi * nu * K * std::abs(sol.a(K)) * std::exp(-double(K) * K * kPi * kPi * nu * t_min);
    if (bound < 1e-14) return sol;
    if (K >= 4000) {
      throw UnsupportedViscosityError("fourier_solution: series truncation did not settle for nu = " +
                                      std::to_string(nu));
    }
    K = K * 3 / 2;
  }
}

double FourierSolution::operator()(double x, double t) const { return fourier_eval(*this, x, t); }

double fourier_eval(const FourierSolution& sol, double x, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("fourier_eval: t must be > 0");
  double num = 0.0, den = sol.a(0);
  for (int n = 1; n <= sol.truncation(); ++n) {
    const double c = sol.a(n) * std::exp(-double(n) * n * kPi * kPi * sol.nu * t);
    num += c * n * std::sin(n * kPi * x);
    den += c * std::cos(n * kPi * x);
  }
  if (den < 1e-12 * sol.a(0)) throw ExactEvaluationError("fourier_eval: denominator vanishes");
  return 2.0 * kPi * sol.nu * num / den;
}

double FourierSolution::dx(double x, double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("FourierSolution::dx: t must be > 0");
  double num = 0.0, den = a(0), dnum = 0.0, dden = 0.0;
  for (int n = 1; n <= truncation(); ++n) {
    const double c = a(n) * std::exp(-double(n) * n * kPi * kPi * nu * t);
    const double s = std::sin(n * kPi * x), co = std::cos(n * kPi * x);
    num += c * n * s;
    den += c * co;
    dnum += c * n * n * kPi * co;
    dden -= c * n * kPi * s;
  }
  return 2.0 * kPi * nu * (dnum * den - num * dden) / (den * den);
}

WoodSolution::WoodSolution(double nu_, double sigma_) : nu(nu_), sigma(sigma_) {
  if (!(nu > 0.0)) throw std::invalid_argument("WoodSolution: nu must be > 0");
  if (!(sigma > 1.0)) throw std::invalid_argument("WoodSolution: sigma must be > 1");
}

double WoodSolution::operator()(double x, double t) const {
  const double e = std::exp(-kPi * kPi * nu * t);
  return 2.0 * nu * kPi * e * std::sin(kPi * x) / (sigma + e * std::cos(kPi * x));
}

double WoodSolution::dx(double x, double t) const {
  const double e = std::exp(-kPi * kPi * nu * t);
  const double d = sigma + e * std::cos(kPi * x);
  return 2.0 * nu * kPi * kPi * e * (sigma * std::cos(kPi * x) + e) / (d * d);
}

double WoodSolution::initial(double x) const {
  return 2.0 * nu * kPi * std::sin(kPi * x) / (sigma + std::cos(kPi * x));
}

double wood_eval(const WoodSolution& sol, double x, double t) { return sol(x, t); }

double pde_residual(const SpaceTimeFunction& u, double nu, const std::vector<std::pair<double, double>>& samples,
                    double delta) {
  double worst = 0.0;
  for (const auto& [x, t] : samples) {
    const double c = u(x, t);
    const double ut = (u(x, t + delta) - u(x, t - delta)) / (2.0 * delta);
    const double up = u(x + delta, t), um = u(x - delta, t);
    const double ux = (up - um) / (2.0 * delta);
    const double uxx = (up - 2.0 * c + um) / (delta * delta);
    worst = std::max(worst, std::abs(ut + c * ux - nu * uxx));
  }
  return worst;
}

}  // namespace wgb
