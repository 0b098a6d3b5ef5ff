#pragma once

#include "wgb/forms.hpp"
#include "wgb/mesh.hpp"
#include "wgb/weak_space.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace wgb {

struct SolverConfig {
  int k = 1;
  int n_elements = 80;
  double nu = 0.1;
  double tau = 1e-4;
  double T = 0.1;
  double picard_tol = 1e-12;
  int picard_max = 50;
  int quad_assembly = 0;  // 0 selects 2k+2 points
  int quad_error = 0;     // 0 selects k+6 points

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  /// M = T / tau; validate() guarantees it is within 1e-9 of an integer.
  int n_steps() const;
  int assembly_points() const { return quad_assembly > 0 ? quad_assembly : 2 * k + 2; }
  int error_points() const { return quad_error > 0 ? quad_error : k + 6; }
};

/// Picard iteration hit picard_max without meeting the tolerance.
class NonconvergenceError : public std::runtime_error {
 public:
  NonconvergenceError(int step, int iterations, double increment);
  int step() const { return step_; }  // -1 when raised outside a trajectory
  int iterations() const { return iterations_; }
  double last_increment() const { return increment_; }

 private:
  int step_;
  int iterations_;
  double increment_;
};

struct StepResult {
  WeakFunction next;
  int picard_iters = 0;
  double last_increment = 0.0;
};

/// Fully discrete scheme on a fixed (mesh, k, nu, tau). Mass and diffusion
/// matrices are built once; only the convection matrix changes per sweep.
class BurgersStepper {
 public:
  explicit BurgersStepper(const SolverConfig& config);

  const SolverConfig& config() const { return config_; }
  const Mesh& mesh() const { return mesh_; }
  const WeakDerivative& derivative() const { return deriv_; }
  const DofLayout& layout() const { return layout_; }

  /// One backward Euler step: W = prev, then U = F(W) repeated until
  /// ||U - W|| <= picard_tol * max(1, ||U||). Throws NonconvergenceError.
  StepResult step(const WeakFunction& prev) const;

  /// The linear system F(w) for given previous state and frozen coefficient.
  AssembledSystem linearized_system(const WeakFunction& prev, const WeakFunction& w) const;

  /// Residual vector of the nonlinear scheme with next in both slots.
  Eigen::VectorXd scheme_residual(const WeakFunction& prev, const WeakFunction& next) const;

  /// Discrete L2 norm of interiors plus node values weighted by the mean
  /// length of the adjacent elements.
  double increment_norm(const WeakFunction& v) const;

  double energy(const WeakFunction& v) const { return interior_norm2(v, mesh_); }
  /// 2 tau nu ||d_{w,r} v||_h^2
  double dissipation(const WeakFunction& v) const;

 private:
  SolverConfig config_;
  Mesh mesh_;
  DofLayout layout_;
  WeakDerivative deriv_;
  QuadratureRule assembly_rule_;
  GlobalMatrix mass_;
  GlobalMatrix base_;  // (1/tau) M + nu A
  ConvectionAssembler convection_;
  Eigen::VectorXd node_weights_;
};

/// U_0 = Q_h g. Throws std::invalid_argument unless g(0) = g(1) = 0 within 1e-12.
WeakFunction initial_state(const ScalarFunction& g, const SolverConfig& config);

/// Single step with a freshly built stepper.
StepResult step(const WeakFunction& prev, const SolverConfig& config);

enum class StoreMode { all, final_only };

struct Trajectory {
  std::vector<WeakFunction> states;  // U_0..U_M, or U_0 and U_M
  std::vector<double> times;
  std::vector<int> picard_iters;     // per step n = 1..M
  std::vector<double> energy;        // ||U_n^0||_h^2, n = 0..M
  std::vector<double> dissipation;   // 2 tau nu ||d_{w,r} U_n||_h^2, n = 0..M

  const WeakFunction& final_state() const { return states.back(); }
  /// max over n of energy[n] + dissipation[n] - energy[n-1]; <= 0 means energy stable.
  double max_energy_growth() const;
  int max_picard_iters() const;
};

using StepObserver = std::function<void(int step, double t, const WeakFunction& state)>;

/// Runs all M steps. Nonconvergence is rethrown with the failing step index.
Trajectory solve_trajectory(const ScalarFunction& g, const SolverConfig& config, StoreMode store,
                            const StepObserver& observer = {});

}  // namespace wgb
