#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "tanglie/errors.hpp"

namespace tanglie {

using Index = Eigen::Index;

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Dense cubic rank-3 array, row-major: t(i, j, k) sits at (i*n + j)*n + k.
template <class Scalar>
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(Index n) : n_(n), data_(static_cast<std::size_t>(n * n * n), Scalar(0)) {}

  Index dimension() const { return n_; }
  std::size_t size() const { return data_.size(); }

  Scalar& operator()(Index i, Index j, Index k) { return data_[offset(i, j, k)]; }
  const Scalar& operator()(Index i, Index j, Index k) const { return data_[offset(i, j, k)]; }

  const std::vector<Scalar>& data() const { return data_; }

  Eigen::Map<const Vector<Scalar>> flat() const {
    return {data_.data(), static_cast<Index>(data_.size())};
  }

  /// Vector of last-slot components at (i, j).
  Vector<Scalar> fiber(Index i, Index j) const {
    return Eigen::Map<const Vector<Scalar>>(data_.data() + offset(i, j, 0), n_);
  }

  void set_fiber(Index i, Index j, const Vector<Scalar>& v) {
    Eigen::Map<Vector<Scalar>>(data_.data() + offset(i, j, 0), n_) = v;
  }

  Scalar max_abs() const { return data_.empty() ? Scalar(0) : flat().cwiseAbs().maxCoeff(); }

 private:
  std::size_t offset(Index i, Index j, Index k) const {
    return static_cast<std::size_t>((i * n_ + j) * n_ + k);
  }

  Index n_ = 0;
  std::vector<Scalar> data_;
};

/// Dense rank-4 array, row-major: t(i, j, k, h).
template <class Scalar>
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(Index n) : n_(n), data_(static_cast<std::size_t>(n * n * n * n), Scalar(0)) {}

  Index dimension() const { return n_; }
  std::size_t size() const { return data_.size(); }

  Scalar& operator()(Index i, Index j, Index k, Index h) { return data_[offset(i, j, k, h)]; }
  const Scalar& operator()(Index i, Index j, Index k, Index h) const {
    return data_[offset(i, j, k, h)];
  }

  const std::vector<Scalar>& data() const { return data_; }

  Eigen::Map<const Vector<Scalar>> flat() const {
    return {data_.data(), static_cast<Index>(data_.size())};
  }

  Vector<Scalar> fiber(Index i, Index j, Index k) const {
    return Eigen::Map<const Vector<Scalar>>(data_.data() + offset(i, j, k, 0), n_);
  }

  Scalar max_abs() const { return data_.empty() ? Scalar(0) : flat().cwiseAbs().maxCoeff(); }

 private:
  std::size_t offset(Index i, Index j, Index k, Index h) const {
    return static_cast<std::size_t>(((i * n_ + j) * n_ + k) * n_ + h);
  }

  Index n_ = 0;
  std::vector<Scalar> data_;
};

/// sum_{i,j} x_i y_j t(i, j, :)
template <class Scalar>
Vector<Scalar> contract(const Tensor3<Scalar>& t, const Vector<Scalar>& x, const Vector<Scalar>& y) {
  const Index n = t.dimension();
  Vector<Scalar> out = Vector<Scalar>::Zero(n);
  for (Index i = 0; i < n; ++i) {
    if (x(i) == Scalar(0)) continue;
    for (Index j = 0; j < n; ++j) {
      if (y(j) == Scalar(0)) continue;
      out += (x(i) * y(j)) * t.fiber(i, j);
    }
  }
  return out;
}

/// sum_{i,j,k} x_i y_j z_k t(i, j, k, :)
template <class Scalar>
Vector<Scalar> contract(const Tensor4<Scalar>& t, const Vector<Scalar>& x, const Vector<Scalar>& y,
                        const Vector<Scalar>& z) {
  const Index n = t.dimension();
  Vector<Scalar> out = Vector<Scalar>::Zero(n);
  for (Index i = 0; i < n; ++i) {
    if (x(i) == Scalar(0)) continue;
    for (Index j = 0; j < n; ++j) {
      if (y(j) == Scalar(0)) continue;
      for (Index k = 0; k < n; ++k) {
        if (z(k) == Scalar(0)) continue;
        out += (x(i) * y(j) * z(k)) * t.fiber(i, j, k);
      }
    }
  }
  return out;
}

/// Re-expresses a (2,1) tensor of the kind "t(e_i, e_j) = sum_k t(i,j,k) e_k" in the
/// basis whose vectors are the columns of `basis`. Structure constants and the
/// Christoffel symbols of a left-invariant connection both transform this way.
template <class Scalar>
Tensor3<Scalar> change_basis(const Tensor3<Scalar>& t, const Matrix<Scalar>& basis) {
  const Index n = t.dimension();
  if (basis.rows() != n || basis.cols() != n) {
    throw InvalidDimension("change_basis: basis matrix must be square of the tensor dimension");
  }
  Eigen::FullPivLU<Matrix<Scalar>> lu(basis);
  if (!lu.isInvertible()) throw SingularMap("change_basis: basis matrix is singular");
  const Matrix<Scalar> inverse = lu.inverse();

  // Staged contraction, one slot at a time.
  Tensor3<Scalar> a(n), b(n), out(n);
  for (Index p = 0; p < n; ++p)
    for (Index q = 0; q < n; ++q)
      for (Index k = 0; k < n; ++k) {
        Scalar s(0);
        for (Index r = 0; r < n; ++r) s += t(p, q, r) * inverse(k, r);
        a(p, q, k) = s;
      }
  for (Index p = 0; p < n; ++p)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) {
        Scalar s(0);
        for (Index q = 0; q < n; ++q) s += basis(q, j) * a(p, q, k);
        b(p, j, k) = s;
      }
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) {
        Scalar s(0);
        for (Index p = 0; p < n; ++p) s += basis(p, i) * b(p, j, k);
        out(i, j, k) = s;
      }
  return out;
}

}  // namespace tanglie
