#pragma once

#include <Eigen/Dense>

#include <utility>

namespace wgb {

/// Partition 0 = x_0 < x_1 < ... < x_n = 1 of the unit interval.
/// Element i is (x_i, x_{i+1}), 0-based.
class Mesh {
 public:
  /// Validates endpoints and strict monotonicity; throws std::invalid_argument.
  explicit Mesh(Eigen::VectorXd nodes);

  int n_elements() const { return static_cast<int>(nodes_.size()) - 1; }
  int n_nodes() const { return static_cast<int>(nodes_.size()); }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  double node(int i) const { return nodes_(i); }
  double element_size(int e) const { return nodes_(e + 1) - nodes_(e); }
  double max_element_size() const;

  /// Physical coordinate of ref_point in [-1,1] on element e.
  double map_to_element(int e, double ref_point) const;
  /// Jacobian dx/dt = h_e / 2.
  double jacobian(int e) const;

  /// Element containing x; a shared node belongs to the element on its left.
  int locate(double x) const;
  /// Index of the node within tol of x, or -1.
  int find_node(double x, double tol = 1e-12) const;

 private:
  void check_element(int e) const;
  Eigen::VectorXd nodes_;
};

/// Uniform mesh with n_elements intervals; throws std::invalid_argument if n_elements < 1.
Mesh build_uniform_mesh(int n_elements);

}  // namespace wgb
