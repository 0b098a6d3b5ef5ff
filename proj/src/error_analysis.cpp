#include "wgb/error_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wgb {

double discrete_l2_error(const SpaceTimeFunction& exact, const WeakFunction& state, const Mesh& mesh, double t,
                         const QuadratureRule& rule) {
  double s = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const RefPoly p = state.interior_poly(e);
    for (int q = 0; q < rule.size(); ++q) {
      const double diff = exact(mesh.map_to_element(e, rule.points(q)), t) - p(rule.points(q));
      s += rule.weights(q) * mesh.jacobian(e) * diff * diff;
    }
  }
  return std::sqrt(s);
}

double discrete_h1_error(const SpaceTimeFunction& exact_dx, const WeakFunction& state, const Mesh& mesh,
                         const WeakDerivative& deriv, double t, const QuadratureRule& rule) {
  double s = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const RefPoly d = deriv.apply(state, e);
    for (int q = 0; q < rule.size(); ++q) {
      const double diff = exact_dx(mesh.map_to_element(e, rule.points(q)), t) - d(rule.points(q));
      s += rule.weights(q) * mesh.jacobian(e) * diff * diff;
    }
  }
  return std::sqrt(s);
}

ExactProblem example1_problem(double nu, double t_min) {
  const FourierSolution sol = fourier_solution(nu, t_min);
  return ExactProblem{"example1",
                      [](double x) { return std::sin(std::numbers::pi * x); },
                      [sol](double x, double t) { return fourier_eval(sol, x, t); },
                      [sol](double x, double t) { return sol.dx(x, t); }};
}

ExactProblem example2_problem(double nu, double sigma) {
  const WoodSolution sol(nu, sigma);
  return ExactProblem{"example2",
                      [sol](double x) { return sol.initial(x); },
                      [sol](double x, double t) { return sol(x, t); },
                      [sol](double x, double t) { return sol.dx(x, t); }};
}

std::optional<double> fitted_slope(const std::vector<double>& h, const std::vector<double>& errors) {
  const std::size_t n = std::min(h.size(), errors.size());
  if (n < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(h[i]);
    my += std::log(errors[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(h[i]) - mx;
    sxy += dx * (std::log(errors[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

void fit_rates(ConvergenceTable& table) {
  std::vector<double> h, l2, h1;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    ConvergenceRow& row = table.rows[i];
    h.push_back(row.h);
    l2.push_back(row.l2_error);
    h1.push_back(row.h1_error);
    row.l2_rate.reset();
    row.h1_rate.reset();
    if (i == 0) continue;
    const ConvergenceRow& prev = table.rows[i - 1];
    if (row.n_elements != 2 * prev.n_elements) continue;  // rates only across exact halvings
    row.l2_rate = std::log2(prev.l2_error / row.l2_error);
    row.h1_rate = std::log2(prev.h1_error / row.h1_error);
  }
  table.l2_slope = fitted_slope(h, l2);
  table.h1_slope = fitted_slope(h, h1);
}

double study_time_step(double h, int k, double T) {
  const double tau = std::min(1e-4, std::pow(h, k + 1) / 20.0);
  const double steps = std::ceil(T / tau - 1e-9);
  return T / steps;
}

ErrorReport error_report(const ExactProblem& problem, const WeakFunction& state, const SolverConfig& config,
                         double t) {
  const Mesh mesh = build_uniform_mesh(config.n_elements);
  const WeakDerivative deriv(mesh, config.k);
  const QuadratureRule rule = gauss_rule(config.error_points());
  return ErrorReport{discrete_l2_error(problem.solution, state, mesh, t, rule),
                     discrete_h1_error(problem.solution_dx, state, mesh, deriv, t, rule),
                     config.k,
                     config.n_elements,
                     config.nu,
                     config.tau,
                     t};
}

namespace {

ConvergenceRow run_one(const ExactProblem& problem, const StudySettings& s, int n) {
  SolverConfig config;
  config.k = s.k;
  config.n_elements = n;
  config.nu = s.nu;
  config.T = s.T;
  config.tau = s.tau ? *s.tau : study_time_step(1.0 / n, s.k, s.T);
  Trajectory traj;
  try {
    traj = solve_trajectory(problem.initial, config, StoreMode::final_only);
  } catch (const NonconvergenceError& err) {
    throw std::runtime_error("convergence study, N = " + std::to_string(n) + ": " + err.what());
  }
  const ErrorReport rep = error_report(problem, traj.final_state(), config, traj.times.back());
  ConvergenceRow row;
  row.n_elements = n;
  row.h = 1.0 / n;
  row.tau = config.tau;
  row.l2_error = rep.l2_error;
  row.h1_error = rep.h1_error;
  row.max_energy_growth = traj.max_energy_growth();
  row.max_picard_iters = traj.max_picard_iters();
  return row;
}

}  // namespace

ConvergenceTable convergence_study(const ExactProblem& problem, const StudySettings& settings) {
  const auto& sizes = settings.mesh_sizes;
  if (sizes.empty()) throw std::invalid_argument("convergence_study: no mesh sizes");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] != 2 * sizes[i - 1]) {
      throw std::invalid_argument("convergence_study: mesh sizes must form a halving chain");
    }
  }

  ConvergenceTable table;
  table.rows.resize(sizes.size());
  const std::size_t workers = static_cast<std::size_t>(std::max(1, settings.threads));
  // batches of `workers` meshes; results land in their own slots so order is deterministic
  for (std::size_t start = 0; start < sizes.size(); start += workers) {
    std::vector<std::future<ConvergenceRow>> jobs;
    const std::size_t stop = std::min(sizes.size(), start + workers);
    for (std::size_t i = start; i < stop; ++i) {
      jobs.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred,
                                [&, n = sizes[i]] { return run_one(problem, settings, n); }));
    }
    for (std::size_t i = start; i < stop; ++i) table.rows[i] = jobs[i - start].get();
  }
  fit_rates(table);
  return table;
}

}  // namespace wgb
