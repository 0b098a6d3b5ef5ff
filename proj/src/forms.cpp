#include "wgb/forms.hpp"

#include "wgb/legendre.hpp"

#include <stdexcept>
#include <string>

namespace wgb {

GlobalMatrix::GlobalMatrix(const DofLayout& layout)
    : layout_(layout), band_(layout.size(), layout.k + 2, layout.k + 2) {}

int GlobalMatrix::position(int dof) const {
  const int stride = layout_.k + 2;
  if (dof < layout_.interior_count()) {
    const int e = dof / (layout_.k + 1), j = dof % (layout_.k + 1);
    return e * stride + j;
  }
  const int node = dof - layout_.interior_count() + 1;
  return node * stride - 1;
}

void GlobalMatrix::add_element(int e, const Eigen::MatrixXd& local) {
  const Eigen::VectorXi dofs = layout_.element_dofs(e);
  for (int a = 0; a < dofs.size(); ++a) {
    if (dofs(a) < 0) continue;
    for (int b = 0; b < dofs.size(); ++b) {
      if (dofs(b) < 0 || local(a, b) == 0.0) continue;
      add(dofs(a), dofs(b), local(a, b));
    }
  }
}

Eigen::VectorXd GlobalMatrix::operator*(const Eigen::VectorXd& x) const {
  Eigen::VectorXd xp(size());
  for (int i = 0; i < size(); ++i) xp(position(i)) = x(i);
  const Eigen::VectorXd yp = band_ * xp;
  Eigen::VectorXd y(size());
  for (int i = 0; i < size(); ++i) y(i) = yp(position(i));
  return y;
}

GlobalMatrix& GlobalMatrix::operator+=(const GlobalMatrix& other) {
  band_ += other.band_;
  return *this;
}

GlobalMatrix& GlobalMatrix::operator*=(double s) {
  band_ *= s;
  return *this;
}

Eigen::MatrixXd GlobalMatrix::dense() const {
  Eigen::MatrixXd a(size(), size());
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j) a(i, j) = (*this)(i, j);
  return a;
}

GlobalMatrix operator+(GlobalMatrix a, const GlobalMatrix& b) { return a += b; }
GlobalMatrix operator*(double s, GlobalMatrix a) { return a *= s; }

GlobalMatrix assemble_mass(const Mesh& mesh, int k) {
  const DofLayout layout{mesh.n_elements(), k};
  GlobalMatrix m(layout);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    for (int j = 0; j <= k; ++j) {
      m.add(layout.interior(e, j), layout.interior(e, j), mesh.element_size(e) / (2 * j + 1));
    }
  }
  return m;
}

namespace {

// Gram matrix of P_0..P_r on an element of length h.
Eigen::VectorXd legendre_gram_diagonal(int r, double h) {
  Eigen::VectorXd g(r + 1);
  for (int i = 0; i <= r; ++i) g(i) = h / (2 * i + 1);
  return g;
}

}  // namespace

GlobalMatrix assemble_diffusion(const Mesh& mesh, const WeakDerivative& deriv) {
  GlobalMatrix a(DofLayout{mesh.n_elements(), deriv.k()});
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const Eigen::MatrixXd& d = deriv.op(e);
    const Eigen::VectorXd g = legendre_gram_diagonal(deriv.r(), mesh.element_size(e));
    a.add_element(e, d.transpose() * g.asDiagonal() * d);
  }
  return a;
}

GlobalMatrix assemble_diffusion(const Mesh& mesh, int k) {
  return assemble_diffusion(mesh, WeakDerivative(mesh, k));
}

ConvectionAssembler::ConvectionAssembler(const Mesh& mesh, const WeakDerivative& deriv,
                                         const QuadratureRule& rule)
    : k_(deriv.k()), weights_(rule.weights) {
  if (rule.exact_degree() < 3 * k_ + 1) {
    throw std::invalid_argument("ConvectionAssembler: rule must be exact for degree " +
                                std::to_string(3 * k_ + 1));
  }
  const int nq = rule.size();
  interior_basis_.resize(nq, k_ + 1);
  Eigen::MatrixXd deriv_basis(nq, k_ + 2);
  for (int q = 0; q < nq; ++q) {
    const Eigen::VectorXd p = legendre_all(k_ + 1, rule.points(q));
    deriv_basis.row(q) = p.transpose();
    interior_basis_.row(q) = p.head(k_ + 1).transpose();
  }
  for (int e = 0; e < mesh.n_elements(); ++e) {
    psi_.push_back(deriv_basis * deriv.op(e));
    jacobians_.push_back(mesh.jacobian(e));
  }
}

void ConvectionAssembler::add_to(GlobalMatrix& target, const WeakFunction& w) const {
  if (w.k != k_ || w.n_elements() != static_cast<int>(psi_.size())) {
    throw std::invalid_argument("assemble_convection: coefficient does not match (mesh, k)");
  }
  const int nq = static_cast<int>(weights_.size());
  Eigen::VectorXd wq(nq);
  Eigen::MatrixXd cross(k_ + 3, k_ + 3);
  for (std::size_t e = 0; e < psi_.size(); ++e) {
    wq.noalias() = interior_basis_ * w.interior.col(static_cast<Eigen::Index>(e));
    wq.array() *= weights_.array() * (jacobians_[e] / 3.0);
    if (wq.isZero(0.0)) continue;
    // rows over v^0 only; node-value rows of phi are zero
    cross.setZero();
    cross.topRows(k_ + 1).noalias() = interior_basis_.transpose() * wq.asDiagonal() * psi_[e];
    target.add_element(static_cast<int>(e), cross - cross.transpose());
  }
}

GlobalMatrix assemble_convection(const WeakFunction& w, const Mesh& mesh, const WeakDerivative& deriv,
                                 const QuadratureRule& rule) {
  GlobalMatrix c(DofLayout{mesh.n_elements(), deriv.k()});
  ConvectionAssembler(mesh, deriv, rule).add_to(c, w);
  return c;
}

GlobalMatrix assemble_convection(const WeakFunction& w, const Mesh& mesh) {
  return assemble_convection(w, mesh, WeakDerivative(mesh, w.k), gauss_rule(2 * w.k + 2));
}

Eigen::VectorXd solve_banded(const AssembledSystem& system) {
  const GlobalMatrix& m = system.matrix;
  const int n = m.size();
  if (system.rhs.size() != n) throw std::invalid_argument("solve_banded: rhs size mismatch");
  Eigen::VectorXd bp(n);
  for (int i = 0; i < n; ++i) bp(m.position(i)) = system.rhs(i);
  const BandedLU<double> lu(m.band());
  const Eigen::VectorXd xp = lu.solve(bp);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = xp(m.position(i));

  const double rhs_norm = system.rhs.lpNorm<Eigen::Infinity>();
  const double residual = (m * x - system.rhs).lpNorm<Eigen::Infinity>();
  if (residual > 1e-10 * rhs_norm) {
    throw std::runtime_error("solve_banded: residual " + std::to_string(residual) +
                             " exceeds tolerance");
  }
  return x;
}

double interior_norm2(const WeakFunction& v, const Mesh& mesh) {
  double s = 0.0;
  for (int e = 0; e < v.n_elements(); ++e) {
    for (int j = 0; j <= v.k; ++j) {
      s += mesh.element_size(e) / (2 * j + 1) * v.interior(j, e) * v.interior(j, e);
    }
  }
  return s;
}

double weak_derivative_norm2(const WeakFunction& v, const Mesh& mesh, const WeakDerivative& deriv) {
  double s = 0.0;
  for (int e = 0; e < v.n_elements(); ++e) {
    const Eigen::VectorXd d = deriv.apply(v, e).coeffs;
    const Eigen::VectorXd g = legendre_gram_diagonal(deriv.r(), mesh.element_size(e));
    s += d.cwiseProduct(g).dot(d);
  }
  return s;
}

}  // namespace wgb
