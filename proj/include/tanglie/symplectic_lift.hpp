#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>

#include "tanglie/errors.hpp"
#include "tanglie/lie_core.hpp"
#include "tanglie/tangent_lift.hpp"

namespace tanglie {

/// Antisymmetric bilinear form, w(i, j) = omega(X_i, X_j). The stored matrix is
/// exactly antisymmetric.
template <class Scalar>
class TwoForm {
 public:
  TwoForm() = default;

  explicit TwoForm(const Matrix<Scalar>& w, Scalar symmetry_tol = Scalar(1e-9)) {
    if (w.rows() != w.cols()) throw InvalidDimension("TwoForm: matrix must be square");
    if (w.size() > 0 && (w + w.transpose()).cwiseAbs().maxCoeff() > symmetry_tol) {
      throw PreconditionViolated("TwoForm: matrix is not antisymmetric");
    }
    w_ = (w - w.transpose()) / Scalar(2);
  }

  Index dim() const { return w_.rows(); }
  const Matrix<Scalar>& matrix() const { return w_; }
  Scalar operator()(const Vector<Scalar>& x, const Vector<Scalar>& y) const { return x.dot(w_ * y); }

 private:
  Matrix<Scalar> w_;
};

/// max over basis triples of |w([X_i,X_j],X_k) + w([X_j,X_k],X_i) + w([X_k,X_i],X_j)|
template <class Scalar>
Scalar cocycle_defect(const LieAlgebra<Scalar>& a, const TwoForm<Scalar>& w) {
  if (w.dim() != a.dim()) throw InvalidDimension("cocycle_defect: dimension mismatch");
  const Index n = a.dim();
  const auto& c = a.constants();
  const Matrix<Scalar>& m = w.matrix();
  Scalar worst(0);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) {
        const Scalar s = c.fiber(i, j).dot(m.col(k)) + c.fiber(j, k).dot(m.col(i)) + c.fiber(k, i).dot(m.col(j));
        worst = std::max(worst, Scalar(std::abs(s)));
      }
  return worst;
}

template <class Scalar>
Scalar smallest_singular_value(const TwoForm<Scalar>& w) {
  if (w.dim() == 0) return Scalar(0);
  Eigen::JacobiSVD<Matrix<Scalar>> svd(w.matrix());
  return svd.singularValues()(w.dim() - 1);
}

/// Closed (cocycle) and nondegenerate on an even-dimensional algebra.
template <class Scalar>
bool is_symplectic(const LieAlgebra<Scalar>& a, const TwoForm<Scalar>& w, Scalar tol) {
  if (w.dim() != a.dim() || a.dim() % 2 != 0) return false;
  return cocycle_defect(a, w) <= tol && smallest_singular_value(w) > tol;
}

/// Lifted form on the unnormalized lift basis {X^v, X^c} of the input basis:
/// vertical pairs vanish, w~(X^c, Y^c) = w1(X, Y), w~(X^c, Y^v) = w2(X, Y).
template <class Scalar>
Matrix<Scalar> lift_symplectic_unnormalized(const TwoForm<Scalar>& w1, const TwoForm<Scalar>& w2) {
  if (w1.dim() != w2.dim()) throw InvalidDimension("lift_symplectic: form dimensions differ");
  const Index n = w1.dim();
  Matrix<Scalar> out = Matrix<Scalar>::Zero(2 * n, 2 * n);
  out.topRightCorner(n, n) = w2.matrix();     // w~(X_i^v, X_j^c) = -w2(X_j, X_i) = w2(X_i, X_j)
  out.bottomLeftCorner(n, n) = w2.matrix();   // w~(X_i^c, X_j^v) = w2(X_i, X_j)
  out.bottomRightCorner(n, n) = w1.matrix();
  return out;
}

/// Lifted symplectic form in the normalized frame of `t`. Both inputs must be
/// symplectic on the base algebra.
template <class Scalar>
TwoForm<Scalar> lift_symplectic(const TangentLieAlgebra<Scalar>& t, const TwoForm<Scalar>& w1,
                                const TwoForm<Scalar>& w2, Scalar tol = Scalar(1e-8)) {
  if (t.base_dim() % 2 != 0) {
    throw NotSymplecticInput("lift_symplectic: odd-dimensional algebra carries no symplectic form");
  }
  if (w1.dim() != t.base_dim() || w2.dim() != t.base_dim()) {
    throw NotSymplecticInput("lift_symplectic: form dimension does not match the algebra");
  }
  if (!is_symplectic(t.input(), w1, tol)) throw NotSymplecticInput("lift_symplectic: first form is not symplectic");
  if (!is_symplectic(t.input(), w2, tol)) throw NotSymplecticInput("lift_symplectic: second form is not symplectic");
  const Matrix<Scalar> frame = t.lift_frame();
  return TwoForm<Scalar>(Matrix<Scalar>(frame.transpose() * lift_symplectic_unnormalized(w1, w2) * frame));
}

/// Lift-type patterns of the closedness identity, in order:
/// vvv, vvc, vcv, cvv, ccv, cvc, vcc, ccc (letters give the lifts of X, Y, Z).
inline constexpr std::array<const char*, 8> closedness_pattern_names{"vvv", "vvc", "vcv", "cvv",
                                                                     "ccv", "cvc", "vcc", "ccc"};

/// Max residual of each closedness pattern over all triples of input basis vectors.
template <class Scalar>
std::array<Scalar, 8> verify_closedness_identities(const TangentLieAlgebra<Scalar>& t,
                                                   const TwoForm<Scalar>& lifted_form) {
  if (lifted_form.dim() != t.dim()) throw InvalidDimension("verify_closedness_identities: dimension mismatch");
  const Index n = t.base_dim();
  const auto& big = t.lifted();

  std::array<std::vector<Vector<Scalar>>, 2> lifts;  // [0] vertical, [1] complete
  for (Index i = 0; i < n; ++i) {
    const Vector<Scalar> e = Vector<Scalar>::Unit(n, i);
    lifts[0].push_back(LiftedVector<Scalar>::vertical(t, e).coeffs());
    lifts[1].push_back(LiftedVector<Scalar>::complete(t, e).coeffs());
  }
  static constexpr std::array<std::array<int, 3>, 8> patterns{
      {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}}};

  std::array<Scalar, 8> out{};
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    const auto& kinds = patterns[p];
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        for (Index k = 0; k < n; ++k) {
          const auto& x = lifts[kinds[0]][i];
          const auto& y = lifts[kinds[1]][j];
          const auto& z = lifts[kinds[2]][k];
          const Scalar s = lifted_form(bracket(big, x, y), z) + lifted_form(bracket(big, y, z), x) +
                           lifted_form(bracket(big, z, x), y);
          out[p] = std::max(out[p], Scalar(std::abs(s)));
        }
  }
  return out;
}

}  // namespace tanglie
