#include "wgb/time_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace wgb {

void SolverConfig::validate() const {
  if (k < 0) throw std::invalid_argument("SolverConfig: k must be >= 0");
  if (n_elements < 2) throw std::invalid_argument("SolverConfig: n_elements must be >= 2");
  if (!(nu > 0.0)) throw std::invalid_argument("SolverConfig: nu must be > 0");
  if (!(tau > 0.0)) throw std::invalid_argument("SolverConfig: tau must be > 0");
  if (!(T > 0.0)) throw std::invalid_argument("SolverConfig: T must be > 0");
  if (!(picard_tol > 0.0)) throw std::invalid_argument("SolverConfig: picard_tol must be > 0");
  if (picard_max < 1) throw std::invalid_argument("SolverConfig: picard_max must be >= 1");
  const double m = T / tau;
  if (std::abs(m - std::round(m)) > 1e-9 || std::round(m) < 1.0) {
    throw std::invalid_argument("SolverConfig: T / tau = " + std::to_string(m) +
                                " is not an integer step count");
  }
  if (3 * k + 1 > 2 * assembly_points() - 1) {
    throw std::invalid_argument("SolverConfig: quad_assembly too small for degree 3k+1");
  }
}

int SolverConfig::n_steps() const { return static_cast<int>(std::lround(T / tau)); }

NonconvergenceError::NonconvergenceError(int step, int iterations, double increment)
    : std::runtime_error("Picard iteration did not converge" +
                         (step >= 0 ? " at step " + std::to_string(step) : std::string()) + " after " +
                         std::to_string(iterations) + " iterations (last increment " +
                         std::to_string(increment) + ")"),
      step_(step),
      iterations_(iterations),
      increment_(increment) {}

namespace {

SolverConfig validated(const SolverConfig& c) {
  c.validate();
  return c;
}

}  // namespace

BurgersStepper::BurgersStepper(const SolverConfig& config)
    : config_(validated(config)),
      mesh_(build_uniform_mesh(config.n_elements)),
      layout_{config.n_elements, config.k},
      deriv_(mesh_, config.k),
      assembly_rule_(gauss_rule(config.assembly_points())),
      mass_(assemble_mass(mesh_, config.k)),
      base_((1.0 / config.tau) * mass_ + config.nu * assemble_diffusion(mesh_, deriv_)),
      convection_(mesh_, deriv_, assembly_rule_) {
  node_weights_ = Eigen::VectorXd::Zero(mesh_.n_nodes());
  for (int e = 0; e < mesh_.n_elements(); ++e) {
    node_weights_(e) += 0.5 * mesh_.element_size(e);
    node_weights_(e + 1) += 0.5 * mesh_.element_size(e);
  }
}

AssembledSystem BurgersStepper::linearized_system(const WeakFunction& prev, const WeakFunction& w) const {
  AssembledSystem sys{base_, (1.0 / config_.tau) * (mass_ * to_dofs(prev)), config_.nu, config_.tau};
  convection_.add_to(sys.matrix, w);
  return sys;
}

Eigen::VectorXd BurgersStepper::scheme_residual(const WeakFunction& prev, const WeakFunction& next) const {
  const AssembledSystem sys = linearized_system(prev, next);
  return sys.matrix * to_dofs(next) - sys.rhs;
}

double BurgersStepper::increment_norm(const WeakFunction& v) const {
  return std::sqrt(interior_norm2(v, mesh_) + v.node_values.cwiseAbs2().dot(node_weights_));
}

double BurgersStepper::dissipation(const WeakFunction& v) const {
  return 2.0 * config_.tau * config_.nu * weak_derivative_norm2(v, mesh_, deriv_);
}

StepResult BurgersStepper::step(const WeakFunction& prev) const {
  if (!prev.satisfies_dirichlet()) {
    throw std::invalid_argument("BurgersStepper::step: previous state violates boundary conditions");
  }
  AssembledSystem sys = linearized_system(prev, prev);
  WeakFunction w = prev;
  double increment = 0.0;
  for (int m = 1; m <= config_.picard_max; ++m) {
    if (m > 1) {
      sys.matrix = base_;
      convection_.add_to(sys.matrix, w);
    }
    WeakFunction u = from_dofs(solve_banded(sys), layout_);
    increment = increment_norm(u - w);
    const double scale = std::max(1.0, increment_norm(u));
    w = std::move(u);
    if (increment <= config_.picard_tol * scale) return StepResult{std::move(w), m, increment};
  }
  throw NonconvergenceError(-1, config_.picard_max, increment);
}

WeakFunction initial_state(const ScalarFunction& g, const SolverConfig& config) {
  const double g0 = g(0.0), g1 = g(1.0);
  if (std::abs(g0) > 1e-12 || std::abs(g1) > 1e-12) {
    throw std::invalid_argument("initial_state: initial data must vanish at x = 0 and x = 1");
  }
  const Mesh mesh = build_uniform_mesh(config.n_elements);
  WeakFunction u0 = qh_project(g, mesh, config.k, gauss_rule(config.error_points()));
  // pin exactly; g may be zero only to within round-off
  u0.node_values(0) = 0.0;
  u0.node_values(u0.n_nodes() - 1) = 0.0;
  return u0;
}

StepResult step(const WeakFunction& prev, const SolverConfig& config) {
  return BurgersStepper(config).step(prev);
}

double Trajectory::max_energy_growth() const {
  double growth = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n < energy.size(); ++n) {
    growth = std::max(growth, energy[n] + dissipation[n] - energy[n - 1]);
  }
  return growth;
}

int Trajectory::max_picard_iters() const {
  return picard_iters.empty() ? 0 : *std::max_element(picard_iters.begin(), picard_iters.end());
}

Trajectory solve_trajectory(const ScalarFunction& g, const SolverConfig& config, StoreMode store,
                            const StepObserver& observer) {
  const BurgersStepper stepper(config);
  const int m_steps = config.n_steps();

  Trajectory traj;
  WeakFunction current = initial_state(g, config);
  traj.energy.reserve(static_cast<std::size_t>(m_steps) + 1);
  traj.dissipation.reserve(static_cast<std::size_t>(m_steps) + 1);
  traj.picard_iters.reserve(static_cast<std::size_t>(m_steps));
  traj.energy.push_back(stepper.energy(current));
  traj.dissipation.push_back(stepper.dissipation(current));
  traj.states.push_back(current);
  traj.times.push_back(0.0);
  if (observer) observer(0, 0.0, current);

  for (int n = 1; n <= m_steps; ++n) {
    StepResult r;
    try {
      r = stepper.step(current);
    } catch (const NonconvergenceError& err) {
      throw NonconvergenceError(n, err.iterations(), err.last_increment());
    }
    current = std::move(r.next);
    const double t = n * config.tau;
    traj.picard_iters.push_back(r.picard_iters);
    traj.energy.push_back(stepper.energy(current));
    traj.dissipation.push_back(stepper.dissipation(current));
    if (store == StoreMode::all || n == m_steps) {
      traj.states.push_back(current);
      traj.times.push_back(t);
    }
    if (observer) observer(n, t, current);
  }
  return traj;
}

}  // namespace wgb
