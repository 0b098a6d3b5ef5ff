#pragma once

#include "wgb/banded.hpp"
#include "wgb/mesh.hpp"
#include "wgb/quadrature.hpp"
#include "wgb/weak_space.hpp"

#include <Eigen/Dense>

#include <vector>

namespace wgb {

/// Matrix over the S_h^0 degrees of freedom of a DofLayout. Rows and columns
/// are addressed by DofLayout indices; storage is a band matrix over the
/// interleaved ordering (interior of element 0, node 1, interior of element 1, ...),
/// which keeps every element block within kl = ku = k + 2 of the diagonal.
class GlobalMatrix {
 public:
  explicit GlobalMatrix(const DofLayout& layout);

  const DofLayout& layout() const { return layout_; }
  int size() const { return layout_.size(); }
  int bandwidth() const { return band_.upper(); }

  double operator()(int row, int col) const { return band_(position(row), position(col)); }
  void add(int row, int col, double value) { band_.ref(position(row), position(col)) += value; }

  /// Scatter a (k+3)x(k+3) element matrix over [c_0..c_k, v^a, v^b]; pinned boundary entries are dropped.
  void add_element(int e, const Eigen::MatrixXd& local);

  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;
  double form(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const { return v.dot((*this) * u); }

  GlobalMatrix& operator+=(const GlobalMatrix& other);
  GlobalMatrix& operator*=(double s);

  Eigen::MatrixXd dense() const;

  /// Position of a DofLayout index in the banded ordering.
  int position(int dof) const;
  const BandedMatrix<double>& band() const { return band_; }

 private:
  DofLayout layout_;
  BandedMatrix<double> band_;
};

GlobalMatrix operator+(GlobalMatrix a, const GlobalMatrix& b);
GlobalMatrix operator*(double s, GlobalMatrix a);

/// Linear system of one Picard sweep: ((1/tau) M + nu A + C(W)) U = (1/tau) M U_prev.
struct AssembledSystem {
  GlobalMatrix matrix;
  Eigen::VectorXd rhs;
  double nu = 0.0;
  double tau = 0.0;
};

/// (M u, v) = (u^0, v^0)_h; diagonal h_e / (2j+1) on interior coefficients, zero on node values.
GlobalMatrix assemble_mass(const Mesh& mesh, int k);

/// (A u, v) = (d_{w,r} u, d_{w,r} v)_h.
GlobalMatrix assemble_diffusion(const Mesh& mesh, const WeakDerivative& deriv);
GlobalMatrix assemble_diffusion(const Mesh& mesh, int k);

/// Quadrature tables for the convection form on a fixed (mesh, k), reused
/// across Picard sweeps.
class ConvectionAssembler {
 public:
  /// rule must integrate degree 3k+1 exactly.
  ConvectionAssembler(const Mesh& mesh, const WeakDerivative& deriv, const QuadratureRule& rule);

  /// target += C(w)
  void add_to(GlobalMatrix& target, const WeakFunction& w) const;

 private:
  int k_;
  Eigen::VectorXd weights_;
  Eigen::MatrixXd interior_basis_;     // P_j(t_q), j <= k
  std::vector<Eigen::MatrixXd> psi_;   // per element: d_{w,r} of each local basis function at t_q
  std::vector<double> jacobians_;
};

/// (C(w) u, v) = 1/3 (w^0 d_{w,r} u, v^0)_h - 1/3 (w^0 u^0, d_{w,r} v)_h.
/// The matrix is skew-symmetric. rule must integrate degree 3k+1 exactly.
GlobalMatrix assemble_convection(const WeakFunction& w, const Mesh& mesh, const WeakDerivative& deriv,
                                 const QuadratureRule& rule);
/// Same with the default (2k+2)-point assembly rule.
GlobalMatrix assemble_convection(const WeakFunction& w, const Mesh& mesh);

/// Banded LU solve. Throws SingularSystemError on a vanishing pivot and
/// std::runtime_error if the residual exceeds 1e-10 * |rhs|_inf.
Eigen::VectorXd solve_banded(const AssembledSystem& system);

/// ||v^0||_h^2, exact through Legendre orthogonality.
double interior_norm2(const WeakFunction& v, const Mesh& mesh);
/// ||d_{w,r} v||_h^2.
double weak_derivative_norm2(const WeakFunction& v, const Mesh& mesh, const WeakDerivative& deriv);

}  // namespace wgb
