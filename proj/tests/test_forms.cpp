#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "wgb/forms.hpp"

#include <cmath>
#include <random>

using namespace wgb;

namespace {

WeakFunction random_s0(std::mt19937& rng, int n, int k) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  WeakFunction v = WeakFunction::zero(n, k);
  for (int e = 0; e < n; ++e)
    for (int j = 0; j <= k; ++j) v.interior(j, e) = u(rng);
  for (int i = 1; i < n; ++i) v.node_values(i) = u(rng);
  return v;
}

// sum over elements of int f(x) dx with a 20-point rule, f given per element in reference coordinates
template <typename F>
double integrate_elements(const Mesh& mesh, F&& f) {
  const QuadratureRule r = gauss_rule(20);
  double s = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e)
    for (int q = 0; q < r.size(); ++q) s += r.weights(q) * mesh.jacobian(e) * f(e, r.points(q));
  return s;
}

BandedMatrix<double> random_band(std::mt19937& rng, int n, int kl, int ku, bool spd) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  if (spd) kl = ku = std::max(kl, ku);
  BandedMatrix<double> a(n, kl, ku);
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - kl); j <= std::min(n - 1, i + ku); ++j) a.ref(i, j) = u(rng);
  if (spd) {
    // symmetric part plus a diagonal shift
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j <= std::min(n - 1, i + ku); ++j) a.ref(j, i) = a(i, j);
    for (int i = 0; i < n; ++i) a.ref(i, i) = 2.0 * (kl + ku + 1) + std::abs(u(rng));
  }
  return a;
}

}  // namespace

TEST_CASE("mass matrix") {
  const Mesh mesh = build_uniform_mesh(10);
  const GlobalMatrix m0 = assemble_mass(mesh, 0);
  const DofLayout l0{10, 0};
  for (int e = 0; e < 10; ++e) CHECK(m0(l0.interior(e, 0), l0.interior(e, 0)) == doctest::Approx(0.1));
  for (int i = 1; i < 10; ++i) CHECK(m0(l0.node(i), l0.node(i)) == 0.0);

  for (int k = 0; k <= 3; ++k) {
    const GlobalMatrix m = assemble_mass(mesh, k);
    WeakFunction one = WeakFunction::zero(10, k);
    one.interior.row(0).setOnes();
    const Eigen::VectorXd x = to_dofs(one);
    CHECK(m.form(x, x) == doctest::Approx(1.0).epsilon(1e-14));
  }

  std::mt19937 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const int k = trial % 4;
    const WeakFunction u = random_s0(rng, 10, k), v = random_s0(rng, 10, k);
    const double direct =
        integrate_elements(mesh, [&](int e, double t) { return u.interior_poly(e)(t) * v.interior_poly(e)(t); });
    CHECK(std::abs(assemble_mass(mesh, k).form(to_dofs(u), to_dofs(v)) - direct) <= 1e-13);
    CHECK(interior_norm2(u, mesh) == doctest::Approx(assemble_mass(mesh, k).form(to_dofs(u), to_dofs(u))));
  }
}

TEST_CASE("diffusion matrix") {
  // element data {1/2, 0, 1} on (0, 1): the traces of p(x) = x, so d_w = 1 and the form is 1
  const Eigen::MatrixXd d = element_weak_derivative_matrix(0, 1.0);
  Eigen::VectorXd data(3);
  data << 0.5, 0.0, 1.0;
  const Eigen::VectorXd coeffs = d * data;
  const Eigen::Vector2d gram(1.0, 1.0 / 3.0);
  CHECK(coeffs.cwiseProduct(gram).dot(coeffs) == doctest::Approx(1.0).epsilon(1e-14));

  const Mesh mesh = build_uniform_mesh(9);
  std::mt19937 rng(4);
  for (int k = 0; k <= 3; ++k) {
    const WeakDerivative deriv(mesh, k);
    const GlobalMatrix a = assemble_diffusion(mesh, deriv);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(a.size());
    CHECK(a.form(zero, zero) == 0.0);
    for (int trial = 0; trial < 10; ++trial) {
      const WeakFunction u = random_s0(rng, 9, k), v = random_s0(rng, 9, k);
      const double auv = a.form(to_dofs(u), to_dofs(v)), avu = a.form(to_dofs(v), to_dofs(u));
      CHECK(std::abs(auv - avu) <= 1e-13 * std::max(1.0, std::abs(auv)));
      const double direct = integrate_elements(
          mesh, [&](int e, double t) { return deriv.apply(u, e)(t) * deriv.apply(v, e)(t); });
      CHECK(auv == doctest::Approx(direct).epsilon(1e-12));
      CHECK(a.form(to_dofs(u), to_dofs(u)) == doctest::Approx(weak_derivative_norm2(u, mesh, deriv)).epsilon(1e-12));
    }
    // pinned boundaries leave no kernel
    const Eigen::MatrixXd dense = a.dense();
    CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * dense.cwiseAbs().maxCoeff());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (dense + dense.transpose()));
    CHECK(eig.eigenvalues().minCoeff() > 1e-8);
  }
}

TEST_CASE("convection matrix") {
  const Mesh mesh = build_uniform_mesh(8);
  std::mt19937 rng(6);
  for (int k = 0; k <= 3; ++k) {
    const WeakDerivative deriv(mesh, k);
    const QuadratureRule rule = gauss_rule(2 * k + 2);

    const GlobalMatrix c0 = assemble_convection(WeakFunction::zero(8, k), mesh, deriv, rule);
    CHECK(c0.dense().cwiseAbs().maxCoeff() == 0.0);

    for (int trial = 0; trial < 25; ++trial) {
      const WeakFunction w = random_s0(rng, 8, k), u = random_s0(rng, 8, k), v = random_s0(rng, 8, k);
      const GlobalMatrix c = assemble_convection(w, mesh, deriv, rule);
      const Eigen::VectorXd vx = to_dofs(v), ux = to_dofs(u);
      const double scale = std::abs(c.dense().cwiseAbs().maxCoeff()) * vx.squaredNorm();
      CHECK(std::abs(c.form(vx, vx)) <= 1e-13 * scale);

      const double direct = integrate_elements(mesh, [&](int e, double t) {
        const double w0 = w.interior_poly(e)(t);
        return (w0 * deriv.apply(u, e)(t) * v.interior_poly(e)(t) - w0 * u.interior_poly(e)(t) * deriv.apply(v, e)(t)) / 3.0;
      });
      CHECK(std::abs(c.form(ux, vx) - direct) <= 1e-13 * std::max(1.0, std::abs(direct) + scale));
    }
  }
  CHECK_THROWS_AS(assemble_convection(WeakFunction::zero(8, 2), mesh, WeakDerivative(mesh, 2), gauss_rule(3)),
                  std::invalid_argument);
}

TEST_CASE("band structure and translation invariance") {
  for (int k = 0; k <= 2; ++k) {
    std::mt19937 rng(8);
    const int n = 6;
    const Mesh mesh = build_uniform_mesh(n);
    const WeakDerivative deriv(mesh, k);
    const WeakFunction w = random_s0(rng, n, k);
    const GlobalMatrix sys = assemble_mass(mesh, k) + assemble_diffusion(mesh, deriv) +
                             assemble_convection(w, mesh, deriv, gauss_rule(2 * k + 2));
    CHECK(sys.size() == n * (k + 1) + n - 1);
    CHECK(sys.bandwidth() == k + 2);
    const Eigen::MatrixXd dense = sys.dense();
    for (int i = 0; i < sys.size(); ++i)
      for (int j = 0; j < sys.size(); ++j) {
        if (std::abs(sys.position(i) - sys.position(j)) > k + 2) CHECK(dense(i, j) == 0.0);
      }
    // mat-vec agrees with the dense form
    Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(sys.size(), -1.0, 2.0);
    CHECK((sys * x - dense * x).cwiseAbs().maxCoeff() <= 1e-12 * dense.cwiseAbs().maxCoeff());
  }

  // on uniform meshes of different length, the block of interior element 2 is identical
  const int k = 1;
  auto block = [k](int n) {
    const Mesh mesh = build_uniform_mesh(n);
    const GlobalMatrix a = assemble_diffusion(mesh, k);
    const DofLayout layout{n, k};
    const Eigen::VectorXi dofs = layout.element_dofs(2);
    Eigen::MatrixXd b(dofs.size(), dofs.size());
    for (int i = 0; i < dofs.size(); ++i)
      for (int j = 0; j < dofs.size(); ++j) b(i, j) = a(dofs(i), dofs(j));
    return b;
  };
  // compare at equal h: N and N+1 meshes differ in h, so rescale by h^-1 scaling of the diffusion block
  const Eigen::MatrixXd b8 = block(8) / 8.0, b9 = block(9) / 9.0;
  CHECK((b8 - b9).cwiseAbs().maxCoeff() <= 1e-12 * b8.cwiseAbs().maxCoeff());
}

TEST_CASE("banded LU against the dense oracle") {
  std::mt19937 rng(12);
  std::uniform_int_distribution<int> size(1, 50), band(0, 4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = size(rng), kl = band(rng), ku = band(rng);
    const BandedMatrix<double> a = random_band(rng, n, kl, ku, trial % 2 == 0);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) b(i) = u(rng);
    const Eigen::VectorXd expected = oracle::dense_solve(a.dense(), b);
    const Eigen::VectorXd x = BandedLU<double>(a).solve(b);
    CHECK((x - expected).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, expected.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("banded LU pivots") {
  // zero leading diagonal forces a row swap
  BandedMatrix<double> a(3, 1, 1);
  a.ref(0, 0) = 0.0;
  a.ref(0, 1) = 2.0;
  a.ref(1, 0) = 1.0;
  a.ref(1, 1) = 1.0;
  a.ref(1, 2) = 1.0;
  a.ref(2, 1) = 3.0;
  a.ref(2, 2) = 1.0;
  const Eigen::Vector3d b(2.0, 3.0, 4.0);
  const Eigen::VectorXd x = BandedLU<double>(a).solve(b);
  CHECK((a.dense() * x - b).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK_THROWS_AS(a.ref(0, 2), std::out_of_range);
  CHECK(a(2, 0) == 0.0);

  BandedMatrix<double> singular(2, 1, 1);
  singular.ref(0, 0) = 1.0;
  singular.ref(0, 1) = 2.0;
  singular.ref(1, 0) = 2.0;
  singular.ref(1, 1) = 4.0;
  CHECK_THROWS_AS(BandedLU<double>{singular}, SingularSystemError);
}

TEST_CASE("solve_banded") {
  const DofLayout layout{5, 1};
  GlobalMatrix id(layout);
  for (int i = 0; i < layout.size(); ++i) id.add(i, i, 1.0);
  Eigen::VectorXd rhs = Eigen::VectorXd::LinSpaced(layout.size(), 1.0, 3.0);
  CHECK(solve_banded(AssembledSystem{id, rhs, 1.0, 1.0}) == rhs);

  // uniqueness: zero right-hand side gives zero for any frozen coefficient
  std::mt19937 rng(13);
  for (int k = 0; k <= 2; ++k) {
    const Mesh mesh = build_uniform_mesh(12);
    const WeakDerivative deriv(mesh, k);
    for (int trial = 0; trial < 5; ++trial) {
      const WeakFunction w = 50.0 * random_s0(rng, 12, k);
      const double tau = 1e-3, nu = 0.01;
      AssembledSystem sys{(1.0 / tau) * assemble_mass(mesh, k) + nu * assemble_diffusion(mesh, deriv) +
                              assemble_convection(w, mesh, deriv, gauss_rule(2 * k + 2)),
                          Eigen::VectorXd::Zero(DofLayout{12, k}.size()), nu, tau};
      CHECK(solve_banded(sys).cwiseAbs().maxCoeff() == 0.0);

      sys.rhs = to_dofs(random_s0(rng, 12, k));
      const Eigen::VectorXd x = solve_banded(sys);
      CHECK((sys.matrix * x - sys.rhs).cwiseAbs().maxCoeff() <= 1e-10 * sys.rhs.cwiseAbs().maxCoeff());
      const Eigen::VectorXd dense = oracle::dense_solve(sys.matrix.dense(), sys.rhs);
      CHECK((x - dense).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, dense.cwiseAbs().maxCoeff()));
    }
  }

  // with nu = 0 and tau -> infinity only the zero convection is left: singular
  const Mesh mesh = build_uniform_mesh(4);
  GlobalMatrix zero(DofLayout{4, 0});
  CHECK_THROWS_AS(solve_banded(AssembledSystem{zero, Eigen::VectorXd::Ones(zero.size()), 0.0, 1.0}),
                  SingularSystemError);
}
