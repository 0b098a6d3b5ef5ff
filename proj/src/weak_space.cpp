#include "wgb/weak_space.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace wgb {

WeakFunction WeakFunction::zero(int n_elements, int k) {
  WeakFunction v;
  v.k = k;
  v.interior = Eigen::MatrixXd::Zero(k + 1, n_elements);
  v.node_values = Eigen::VectorXd::Zero(n_elements + 1);
  return v;
}

bool WeakFunction::satisfies_dirichlet() const {
  return node_values(0) == 0.0 && node_values(node_values.size() - 1) == 0.0;
}

Eigen::VectorXd WeakFunction::element_data(int e) const {
  Eigen::VectorXd d(k + 3);
  d.head(k + 1) = interior.col(e);
  d(k + 1) = node_values(e);
  d(k + 2) = node_values(e + 1);
  return d;
}

WeakFunction& WeakFunction::operator+=(const WeakFunction& other) {
  interior += other.interior;
  node_values += other.node_values;
  return *this;
}

WeakFunction& WeakFunction::operator*=(double s) {
  interior *= s;
  node_values *= s;
  return *this;
}

WeakFunction operator+(WeakFunction a, const WeakFunction& b) { return a += b; }
WeakFunction operator-(WeakFunction a, const WeakFunction& b) {
  a.interior -= b.interior;
  a.node_values -= b.node_values;
  return a;
}
WeakFunction operator*(double s, WeakFunction a) { return a *= s; }

// With q = P_i(t) on an element of length h the defining identity reads
//   h/(2i+1) d_i = -int v^0 P_i' dt + v^b - (-1)^i v^a,
// and int P_j P_i' dt = 2 when j < i with i - j odd, zero otherwise.
Eigen::MatrixXd element_weak_derivative_matrix(int k, double h) {
  const int r = k + 1;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(r + 1, k + 3);
  for (int i = 0; i <= r; ++i) {
    const double scale = (2 * i + 1) / h;
    for (int j = 0; j <= std::min(k, i - 1); ++j) {
      if ((i - j) % 2 == 1) d(i, j) = -2.0 * scale;
    }
    d(i, k + 1) = (i % 2 == 0) ? -scale : scale;
    d(i, k + 2) = scale;
  }
  return d;
}

WeakDerivative::WeakDerivative(const Mesh& mesh, int k) : k_(k) {
  if (k < 0) throw std::invalid_argument("WeakDerivative: negative degree");
  ops_.reserve(static_cast<std::size_t>(mesh.n_elements()));
  for (int e = 0; e < mesh.n_elements(); ++e) {
    ops_.push_back(element_weak_derivative_matrix(k, mesh.element_size(e)));
  }
}

RefPoly WeakDerivative::apply(const WeakFunction& v, int e) const {
  return RefPoly(op(e) * v.element_data(e));
}

RefPoly weak_derivative(const WeakFunction& v, const Mesh& mesh, int element) {
  if (element < 0 || element >= mesh.n_elements()) {
    throw std::invalid_argument("weak_derivative: element index out of range");
  }
  return RefPoly(element_weak_derivative_matrix(v.k, mesh.element_size(element)) *
                 v.element_data(element));
}

RefPoly l2_project(const ScalarFunction& f, int l, double a, double b, const QuadratureRule& rule) {
  if (rule.exact_degree() < 2 * l) {
    throw std::invalid_argument("l2_project: quadrature rule too coarse for degree " +
                                std::to_string(l));
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(l + 1);
  for (int q = 0; q < rule.size(); ++q) {
    const double t = rule.points(q);
    const double fx = f(a + (t + 1.0) * 0.5 * (b - a));
    c += (rule.weights(q) * fx) * legendre_all(l, t);
  }
  for (int j = 0; j <= l; ++j) c(j) *= (2 * j + 1) / 2.0;
  return RefPoly(std::move(c));
}

WeakFunction qh_project(const ScalarFunction& u, const Mesh& mesh, int k, const QuadratureRule& rule) {
  WeakFunction v = WeakFunction::zero(mesh.n_elements(), k);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    v.interior.col(e) = l2_project(u, k, mesh.node(e), mesh.node(e + 1), rule).coeffs;
  }
  for (int i = 0; i < mesh.n_nodes(); ++i) v.node_values(i) = u(mesh.node(i));
  return v;
}

WeakFunction qh_project(const ScalarFunction& u, const Mesh& mesh, int k) {
  return qh_project(u, mesh, k, gauss_rule(k + 6));
}

double evaluate(const WeakFunction& v, const Mesh& mesh, double x, EvalMode mode) {
  if (mode == EvalMode::node) {
    const int i = mesh.find_node(x);
    if (i < 0) {
      throw std::invalid_argument("evaluate: x = " + std::to_string(x) + " is not a mesh node");
    }
    return v.node_values(i);
  }
  const int e = mesh.locate(x);
  const double t = 2.0 * (x - mesh.node(e)) / mesh.element_size(e) - 1.0;
  return v.interior_poly(e)(std::clamp(t, -1.0, 1.0));
}

Eigen::VectorXi DofLayout::element_dofs(int e) const {
  Eigen::VectorXi idx(k + 3);
  for (int j = 0; j <= k; ++j) idx(j) = interior(e, j);
  idx(k + 1) = (e == 0) ? -1 : node(e);
  idx(k + 2) = (e + 1 == n_elements) ? -1 : node(e + 1);
  return idx;
}

Eigen::VectorXd to_dofs(const WeakFunction& v) {
  const DofLayout layout{v.n_elements(), v.k};
  Eigen::VectorXd x(layout.size());
  x.head(layout.interior_count()) = v.interior.reshaped();
  for (int i = 1; i < layout.n_elements; ++i) x(layout.node(i)) = v.node_values(i);
  return x;
}

WeakFunction from_dofs(const Eigen::VectorXd& dofs, const DofLayout& layout) {
  if (dofs.size() != layout.size()) throw std::invalid_argument("from_dofs: size mismatch");
  WeakFunction v = WeakFunction::zero(layout.n_elements, layout.k);
  v.interior = dofs.head(layout.interior_count()).reshaped(layout.k + 1, layout.n_elements);
  for (int i = 1; i < layout.n_elements; ++i) v.node_values(i) = dofs(layout.node(i));
  return v;
}

}  // namespace wgb
