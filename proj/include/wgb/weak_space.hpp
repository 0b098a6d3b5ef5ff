#pragma once

#include "wgb/legendre.hpp"
#include "wgb/mesh.hpp"
#include "wgb/quadrature.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace wgb {

using ScalarFunction = std::function<double(double)>;

/// Weak function {v^0, v^b}: a degree-k Legendre polynomial per element plus
/// one value per mesh node. Storing a single value per node makes the
/// function single-valued at interior nodes.
struct WeakFunction {
  int k = 0;
  Eigen::MatrixXd interior;     // (k+1) x n_elements, column e holds element e's coefficients
  Eigen::VectorXd node_values;  // n_elements + 1

  static WeakFunction zero(int n_elements, int k);

  int n_elements() const { return static_cast<int>(interior.cols()); }
  int n_nodes() const { return static_cast<int>(node_values.size()); }

  /// Homogeneous boundary values (membership in S_h^0).
  bool satisfies_dirichlet() const;

  /// Local data [c_0..c_k, left node value, right node value] of element e.
  Eigen::VectorXd element_data(int e) const;
  RefPoly interior_poly(int e) const { return RefPoly(interior.col(e)); }

  WeakFunction& operator+=(const WeakFunction& other);
  WeakFunction& operator*=(double s);
};

WeakFunction operator+(WeakFunction a, const WeakFunction& b);
WeakFunction operator-(WeakFunction a, const WeakFunction& b);
WeakFunction operator*(double s, WeakFunction a);

/// Map from element data [c_0..c_k, v^a, v^b] to the Legendre coefficients of
/// the weak derivative in P_{k+1}; size (k+2) x (k+3). Depends only on k and h.
Eigen::MatrixXd element_weak_derivative_matrix(int k, double h);

/// Per-element weak derivative operators for a fixed (mesh, k).
class WeakDerivative {
 public:
  WeakDerivative(const Mesh& mesh, int k);

  int k() const { return k_; }
  int r() const { return k_ + 1; }
  const Eigen::MatrixXd& op(int e) const { return ops_[static_cast<std::size_t>(e)]; }

  /// Legendre coefficients of d_{w,r} v on element e.
  RefPoly apply(const WeakFunction& v, int e) const;

 private:
  int k_;
  std::vector<Eigen::MatrixXd> ops_;
};

/// d_{w,r} v on one element, r = k + 1.
RefPoly weak_derivative(const WeakFunction& v, const Mesh& mesh, int element);

/// Local L2 projection of f onto P_l on [a, b]. Requires rule.exact_degree() >= 2l.
RefPoly l2_project(const ScalarFunction& f, int l, double a, double b, const QuadratureRule& rule);

/// Q_h u: interior P_h^k u per element, node values u(x_i).
WeakFunction qh_project(const ScalarFunction& u, const Mesh& mesh, int k, const QuadratureRule& rule);
/// Q_h u using a (k+6)-point rule for the interior projection.
WeakFunction qh_project(const ScalarFunction& u, const Mesh& mesh, int k);

enum class EvalMode { interior, node };

/// Interior mode evaluates the element polynomial containing x (shared nodes
/// resolve to the left element). Node mode returns the stored node value and
/// throws std::invalid_argument if x is not a node within 1e-12.
double evaluate(const WeakFunction& v, const Mesh& mesh, double x, EvalMode mode);

/// Global S_h^0 degrees of freedom: interior coefficients element-major,
/// followed by the values at nodes x_1..x_{n-1}. Boundary nodes are eliminated.
struct DofLayout {
  int n_elements;
  int k;

  int size() const { return n_elements * (k + 1) + (n_elements - 1); }
  int interior_count() const { return n_elements * (k + 1); }
  int interior(int e, int j) const { return e * (k + 1) + j; }
  /// Interior mesh node i (1 <= i <= n_elements - 1).
  int node(int i) const { return interior_count() + i - 1; }
  /// Global indices of element data [c_0..c_k, v^a, v^b]; -1 marks a pinned boundary node.
  Eigen::VectorXi element_dofs(int e) const;
};

Eigen::VectorXd to_dofs(const WeakFunction& v);
WeakFunction from_dofs(const Eigen::VectorXd& dofs, const DofLayout& layout);

}  // namespace wgb
