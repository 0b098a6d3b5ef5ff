#pragma once

#include "wgb/exact.hpp"
#include "wgb/mesh.hpp"
#include "wgb/quadrature.hpp"
#include "wgb/time_solver.hpp"
#include "wgb/weak_space.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wgb {

/// ||u(t) - v^0||_h by quadrature.
double discrete_l2_error(const SpaceTimeFunction& exact, const WeakFunction& state, const Mesh& mesh, double t,
                         const QuadratureRule& rule);

/// ||u_x(t) - d_{w,r} v||_h by quadrature.
double discrete_h1_error(const SpaceTimeFunction& exact_dx, const WeakFunction& state, const Mesh& mesh,
                         const WeakDerivative& deriv, double t, const QuadratureRule& rule);

struct ErrorReport {
  double l2_error = 0.0;
  double h1_error = 0.0;
  int k = 0;
  int n_elements = 0;
  double nu = 0.0;
  double tau = 0.0;
  double t = 0.0;
};

/// A problem with known solution: initial data, solution and its x-derivative.
struct ExactProblem {
  std::string name;
  ScalarFunction initial;
  SpaceTimeFunction solution;
  SpaceTimeFunction solution_dx;
};

ExactProblem example1_problem(double nu, double t_min);
ExactProblem example2_problem(double nu, double sigma);

struct ConvergenceRow {
  int n_elements = 0;
  double h = 0.0;
  double tau = 0.0;
  double l2_error = 0.0;
  double h1_error = 0.0;
  std::optional<double> l2_rate;  // against the previous (coarser) row
  std::optional<double> h1_rate;
  double max_energy_growth = 0.0;
  int max_picard_iters = 0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;  // decreasing h
  std::optional<double> l2_slope;    // least-squares slope of log(error) against log(h)
  std::optional<double> h1_slope;
};

/// Least-squares slope of log(error) against log(h); empty with fewer than two rows.
std::optional<double> fitted_slope(const std::vector<double>& h, const std::vector<double>& errors);

/// Fills pairwise rates and slopes in place.
void fit_rates(ConvergenceTable& table);

/// tau = min(1e-4, h^{k+1} / 20), shrunk if needed so T / tau is an integer.
double study_time_step(double h, int k, double T);

struct StudySettings {
  int k = 0;
  double nu = 0.1;
  double T = 1.0;
  std::vector<int> mesh_sizes;  // halving chain, e.g. 8, 16, 32
  std::optional<double> tau;    // fixed step; default study_time_step
  int threads = 1;
};

/// Solves on each mesh and reports both errors at t = T. Requires each mesh
/// size to double the previous one. Nonconvergence is rethrown with the mesh size.
ConvergenceTable convergence_study(const ExactProblem& problem, const StudySettings& settings);

ErrorReport error_report(const ExactProblem& problem, const WeakFunction& state, const SolverConfig& config,
                         double t);

}  // namespace wgb
