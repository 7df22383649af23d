#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tanglie/errors.hpp"
#include "tanglie/tensor.hpp"

namespace tanglie {

/// Default numerical tolerances. Every check that takes a tolerance also
/// accepts an explicit override.
struct Tolerances {
  double jacobi = 1e-9;
  double symmetry = 1e-9;
  double positive_definite = 1e-12;
  double check = 1e-8;
};

inline std::vector<std::string> default_labels(Index n) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) labels.push_back("e" + std::to_string(i + 1));
  return labels;
}

/// A finite-dimensional real Lie algebra given by structure constants
/// c(i, j, k) = coefficient of X_k in [X_i, X_j].
///
/// Only the i < j entries of the supplied tensor are read; the i > j entries
/// are filled by negation and the diagonal is zero, so the stored tensor is
/// exactly antisymmetric. The Jacobi identity is not enforced here (see
/// jacobi_defect); problem loading rejects tables that violate it.
template <class Scalar>
class LieAlgebra {
 public:
  LieAlgebra() = default;

  /// Abelian algebra of dimension n.
  explicit LieAlgebra(Index n) : LieAlgebra(default_labels(n), Tensor3<Scalar>(n)) {}

  LieAlgebra(std::vector<std::string> labels, const Tensor3<Scalar>& constants)
      : labels_(std::move(labels)), c_(constants.dimension()) {
    const Index n = constants.dimension();
    if (n <= 0) throw InvalidDimension("LieAlgebra: dimension must be positive");
    if (static_cast<Index>(labels_.size()) != n) {
      throw InvalidDimension("LieAlgebra: need one label per basis vector");
    }
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j)
        for (Index k = 0; k < n; ++k) {
          c_(i, j, k) = constants(i, j, k);
          c_(j, i, k) = -constants(i, j, k);
        }
  }

  Index dim() const { return c_.dimension(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const Tensor3<Scalar>& constants() const { return c_; }
  Scalar operator()(Index i, Index j, Index k) const { return c_(i, j, k); }

  Vector<Scalar> basis_vector(Index i) const { return Vector<Scalar>::Unit(dim(), i); }

  std::optional<Index> index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<Index>(it - labels_.begin());
  }

 private:
  std::vector<std::string> labels_;
  Tensor3<Scalar> c_;
};

/// Builds an algebra from sparse (i, j, k, value) entries with i < j.
template <class Scalar>
struct BracketEntry {
  Index i;
  Index j;
  Index k;
  Scalar value;
};

template <class Scalar>
LieAlgebra<Scalar> make_algebra(std::vector<std::string> labels,
                                const std::vector<BracketEntry<Scalar>>& entries) {
  const auto n = static_cast<Index>(labels.size());
  Tensor3<Scalar> c(n);
  for (const auto& e : entries) {
    if (e.i < 0 || e.j < 0 || e.k < 0 || e.i >= n || e.j >= n || e.k >= n) {
      throw InvalidDimension("make_algebra: bracket index out of range");
    }
    if (e.i < e.j) {
      c(e.i, e.j, e.k) += e.value;
    } else if (e.i > e.j) {
      c(e.j, e.i, e.k) -= e.value;
    }
  }
  return LieAlgebra<Scalar>(std::move(labels), c);
}

/// Symmetric positive-definite bilinear form, g(i, j) = <X_i, X_j>.
template <class Scalar>
class Metric {
 public:
  Metric() = default;

  explicit Metric(const Matrix<Scalar>& g, const Tolerances& tol = {}) {
    if (g.rows() != g.cols() || g.rows() == 0) {
      throw InvalidDimension("Metric: matrix must be square and non-empty");
    }
    const Scalar asym = (g - g.transpose()).cwiseAbs().maxCoeff();
    if (asym > Scalar(tol.symmetry)) throw NonPositiveDefinite("Metric: matrix is not symmetric");
    g_ = (g + g.transpose()) / Scalar(2);
    llt_.compute(g_);
    if (llt_.info() != Eigen::Success) {
      throw NonPositiveDefinite("Metric: Cholesky factorization failed");
    }
    const Vector<Scalar> pivots = Matrix<Scalar>(llt_.matrixL()).diagonal().array().square();
    if (pivots.minCoeff() <= Scalar(tol.positive_definite)) {
      throw NonPositiveDefinite("Metric: Cholesky pivot below threshold");
    }
  }

  static Metric identity(Index n) { return Metric(Matrix<Scalar>::Identity(n, n)); }

  Index dim() const { return g_.rows(); }
  const Matrix<Scalar>& matrix() const { return g_; }
  Scalar operator()(Index i, Index j) const { return g_(i, j); }

  Scalar inner(const Vector<Scalar>& x, const Vector<Scalar>& y) const { return x.dot(g_ * y); }

  /// Solves g v = rhs.
  template <class Rhs>
  Matrix<Scalar> solve(const Eigen::MatrixBase<Rhs>& rhs) const {
    return llt_.solve(rhs);
  }

  const Eigen::LLT<Matrix<Scalar>>& cholesky() const { return llt_; }

 private:
  Matrix<Scalar> g_;
  Eigen::LLT<Matrix<Scalar>> llt_;
};

namespace detail {

template <class Scalar>
void require_vector(const LieAlgebra<Scalar>& a, const Vector<Scalar>& x, const char* what) {
  if (x.size() != a.dim()) throw InvalidDimension(std::string(what) + ": vector dimension mismatch");
}

template <class Scalar>
void require_square(const LieAlgebra<Scalar>& a, const Matrix<Scalar>& m, const char* what) {
  if (m.rows() != a.dim() || m.cols() != a.dim()) {
    throw InvalidDimension(std::string(what) + ": map dimension mismatch");
  }
}

}  // namespace detail

template <class Scalar>
Vector<Scalar> bracket(const LieAlgebra<Scalar>& a, const Vector<Scalar>& x, const Vector<Scalar>& y) {
  detail::require_vector(a, x, "bracket");
  detail::require_vector(a, y, "bracket");
  return contract(a.constants(), x, y);
}

/// Matrix of Y -> [x, Y].
template <class Scalar>
Matrix<Scalar> ad_matrix(const LieAlgebra<Scalar>& a, const Vector<Scalar>& x) {
  detail::require_vector(a, x, "ad_matrix");
  const Index n = a.dim();
  Matrix<Scalar> m = Matrix<Scalar>::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    if (x(i) == Scalar(0)) continue;
    for (Index j = 0; j < n; ++j) m.col(j) += x(i) * a.constants().fiber(i, j);
  }
  return m;
}

/// g-adjoint of ad x: g((ad x)^* y, z) = g(y, [x, z]).
template <class Scalar>
Matrix<Scalar> ad_star(const LieAlgebra<Scalar>& a, const Metric<Scalar>& g, const Vector<Scalar>& x) {
  if (g.dim() != a.dim()) throw InvalidDimension("ad_star: metric dimension mismatch");
  const Matrix<Scalar> ad = ad_matrix(a, x);
  return g.solve(ad.transpose() * g.matrix());
}

/// Largest absolute cyclic Jacobi sum over all basis quadruples.
template <class Scalar>
Scalar jacobi_defect(const LieAlgebra<Scalar>& a) {
  const Index n = a.dim();
  const auto& c = a.constants();
  Scalar worst(0);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k)
        for (Index l = 0; l < n; ++l) {
          Scalar s(0);
          for (Index m = 0; m < n; ++m) {
            s += c(i, j, m) * c(m, k, l) + c(j, k, m) * c(m, i, l) + c(k, i, m) * c(m, j, l);
          }
          worst = std::max(worst, Scalar(std::abs(s)));
        }
  return worst;
}

/// Gram-Schmidt (w.r.t. `form`) over the projections P e_0, P e_1, ... of the
/// standard basis, keeping at most `rank` vectors and dropping projections whose
/// norm falls below `drop`. Gives a deterministic orthonormal basis of range(P).
template <class Scalar>
Matrix<Scalar> orthonormalize_projections(const Matrix<Scalar>& projector, const Matrix<Scalar>& form,
                                          Index rank, Scalar drop = Scalar(1e-10)) {
  const Index n = projector.rows();
  Matrix<Scalar> basis(n, rank);
  Index found = 0;
  for (Index p = 0; p < n && found < rank; ++p) {
    Vector<Scalar> v = projector.col(p);
    for (Index q = 0; q < found; ++q) v -= basis.col(q).dot(form * v) * basis.col(q);
    const Scalar norm = std::sqrt(std::max(Scalar(0), v.dot(form * v)));
    if (norm < drop) continue;
    basis.col(found++) = v / norm;
  }
  return basis.leftCols(found);
}

/// Orthonormal basis (identity form) of the center {y : [x, y] = 0 for all x}.
template <class Scalar>
std::vector<Vector<Scalar>> center(const LieAlgebra<Scalar>& a, Scalar tol = Scalar(1e-9)) {
  const Index n = a.dim();
  Matrix<Scalar> stacked(n * n, n);
  for (Index i = 0; i < n; ++i) stacked.middleRows(i * n, n) = ad_matrix(a, a.basis_vector(i));

  Eigen::JacobiSVD<Matrix<Scalar>> svd(stacked, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const Scalar scale = std::max(Scalar(1), sv.size() > 0 ? sv(0) : Scalar(0));
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * scale) ++rank;
  const Index nullity = n - rank;

  std::vector<Vector<Scalar>> out;
  if (nullity == 0) return out;
  const Matrix<Scalar> kernel = svd.matrixV().rightCols(nullity);
  const Matrix<Scalar> projector = kernel * kernel.transpose();
  const Matrix<Scalar> basis =
      orthonormalize_projections<Scalar>(projector, Matrix<Scalar>::Identity(n, n), nullity);
  for (Index q = 0; q < basis.cols(); ++q) out.emplace_back(basis.col(q));
  return out;
}

/// max_{i,j} |tau [X_i, X_j] - [tau X_i, tau X_j]|
template <class Scalar>
Scalar automorphism_defect(const LieAlgebra<Scalar>& a, const Matrix<Scalar>& tau) {
  detail::require_square(a, tau, "automorphism_defect");
  const Index n = a.dim();
  Scalar worst(0);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const Vector<Scalar> lhs = tau * a.constants().fiber(i, j);
      const Vector<Scalar> rhs = bracket<Scalar>(a, tau.col(i), tau.col(j));
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  return worst;
}

template <class Scalar>
bool is_automorphism(const LieAlgebra<Scalar>& a, const Matrix<Scalar>& tau, Scalar tol) {
  if (tau.rows() != a.dim() || tau.cols() != a.dim()) return false;
  if (!Eigen::FullPivLU<Matrix<Scalar>>(tau).isInvertible()) return false;
  return automorphism_defect(a, tau) <= tol;
}

/// tau^T g tau
template <class Scalar>
Metric<Scalar> pullback_metric(const Metric<Scalar>& g, const Matrix<Scalar>& tau) {
  if (tau.rows() != g.dim() || tau.cols() != g.dim()) {
    throw InvalidDimension("pullback_metric: map dimension mismatch");
  }
  if (!Eigen::FullPivLU<Matrix<Scalar>>(tau).isInvertible()) {
    throw SingularMap("pullback_metric: map is singular");
  }
  return Metric<Scalar>(tau.transpose() * g.matrix() * tau);
}

/// Structure constants of the same algebra in the basis formed by the columns
/// of `basis` (new vectors in old coordinates).
template <class Scalar>
LieAlgebra<Scalar> change_basis_constants(const LieAlgebra<Scalar>& a, const Matrix<Scalar>& basis,
                                          std::vector<std::string> labels = {}) {
  detail::require_square(a, basis, "change_basis_constants");
  if (labels.empty()) labels = default_labels(a.dim());
  return LieAlgebra<Scalar>(std::move(labels), change_basis(a.constants(), basis));
}

}  // namespace tanglie
