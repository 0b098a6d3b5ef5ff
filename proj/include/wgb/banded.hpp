#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace wgb {

class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(int column, double pivot)
      : std::runtime_error("singular banded system: pivot " + std::to_string(pivot) +
                           " at column " + std::to_string(column)),
        column_(column) {}
  int column() const { return column_; }

 private:
  int column_;
};

/// Square band matrix with kl sub- and ku super-diagonals. Storage follows the
/// LAPACK band layout with kl extra rows on top so that LU fill from partial
/// pivoting fits in place: A(i, j) lives at store(kl + ku + i - j, j).
template <typename Scalar>
class BandedMatrix {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BandedMatrix() = default;
  BandedMatrix(int n, int kl, int ku)
      : n_(n), kl_(kl), ku_(ku), store_(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(2 * kl + ku + 1, n)) {}

  int rows() const { return n_; }
  int lower() const { return kl_; }
  int upper() const { return ku_; }
  bool in_band(int i, int j) const { return j - i <= ku_ && i - j <= kl_; }

  Scalar operator()(int i, int j) const {
    return in_band(i, j) ? store_(kl_ + ku_ + i - j, j) : Scalar(0);
  }
  Scalar& ref(int i, int j) {
    if (!in_band(i, j)) {
      throw std::out_of_range("BandedMatrix: (" + std::to_string(i) + ", " + std::to_string(j) +
                              ") outside band");
    }
    return store_(kl_ + ku_ + i - j, j);
  }

  BandedMatrix& operator+=(const BandedMatrix& other) {
    store_ += other.store_;
    return *this;
  }
  BandedMatrix& operator*=(Scalar s) {
    store_ *= s;
    return *this;
  }

  Vector operator*(const Vector& x) const {
    Vector y = Vector::Zero(n_);
    const int offset = kl_ + ku_;
    for (int j = 0; j < n_; ++j) {
      const int i0 = std::max(0, j - ku_), i1 = std::min(n_ - 1, j + kl_);
      const Scalar xj = x(j);
      const Scalar* col = store_.data() + static_cast<Eigen::Index>(j) * store_.rows() + offset - j;
      for (int i = i0; i <= i1; ++i) y(i) += col[i] * xj;
    }
    return y;
  }

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense() const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n_, n_);
    for (int j = 0; j < n_; ++j)
      for (int i = std::max(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i) a(i, j) = (*this)(i, j);
    return a;
  }

  Scalar max_abs() const { return store_.cwiseAbs().maxCoeff(); }

  template <typename>
  friend class BandedLU;

 private:
  int n_ = 0, kl_ = 0, ku_ = 0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> store_;
};

/// LU factorization with partial pivoting restricted to the band (the
/// unblocked gbtf2 algorithm). Throws SingularSystemError when a pivot falls
/// below pivot_tol * max|A|.
template <typename Scalar>
class BandedLU {
 public:
  using Vector = typename BandedMatrix<Scalar>::Vector;

  explicit BandedLU(BandedMatrix<Scalar> a, Scalar pivot_tol = Scalar(1e-14)) : lu_(std::move(a)) {
    const int n = lu_.n_, kl = lu_.kl_, ku = lu_.ku_, kv = kl + ku;
    auto& ab = lu_.store_;
    // the fill rows must start clean
    ab.topRows(kl).setZero();
    const Scalar threshold = pivot_tol * lu_.max_abs();
    pivots_.assign(static_cast<std::size_t>(n), 0);
    int ju = 0;
    for (int j = 0; j < n; ++j) {
      const int km = std::min(kl, n - 1 - j);
      int p = 0;
      Scalar best = std::abs(ab(kv, j));
      for (int i = 1; i <= km; ++i) {
        if (std::abs(ab(kv + i, j)) > best) {
          best = std::abs(ab(kv + i, j));
          p = i;
        }
      }
      pivots_[static_cast<std::size_t>(j)] = j + p;
      if (!(best > threshold)) throw SingularSystemError(j, static_cast<double>(best));
      ju = std::max(ju, std::min(j + ku + p, n - 1));
      if (p != 0) {
        for (int c = j; c <= ju; ++c) std::swap(ab(kv + j + p - c, c), ab(kv + j - c, c));
      }
      const Scalar inv = Scalar(1) / ab(kv, j);
      for (int i = 1; i <= km; ++i) ab(kv + i, j) *= inv;
      for (int c = j + 1; c <= ju; ++c) {
        const Scalar u = ab(kv + j - c, c);
        if (u == Scalar(0)) continue;
        for (int i = 1; i <= km; ++i) ab(kv + j + i - c, c) -= ab(kv + i, j) * u;
      }
    }
  }

  Vector solve(Vector b) const {
    const int n = lu_.n_, kl = lu_.kl_, kv = lu_.kl_ + lu_.ku_;
    const auto& ab = lu_.store_;
    for (int j = 0; j < n; ++j) {
      const int p = pivots_[static_cast<std::size_t>(j)];
      if (p != j) std::swap(b(j), b(p));
      const int km = std::min(kl, n - 1 - j);
      for (int i = 1; i <= km; ++i) b(j + i) -= ab(kv + i, j) * b(j);
    }
    for (int j = n - 1; j >= 0; --j) {
      b(j) /= ab(kv, j);
      for (int i = std::max(0, j - kv); i < j; ++i) b(i) -= ab(kv + i - j, j) * b(j);
    }
    return b;
  }

 private:
  BandedMatrix<Scalar> lu_;
  std::vector<int> pivots_;
};

}  // namespace wgb
