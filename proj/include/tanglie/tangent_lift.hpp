#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "tanglie/errors.hpp"
#include "tanglie/lie_core.hpp"
#include "tanglie/metric_geometry.hpp"
#include "tanglie/tensor.hpp"

namespace tanglie {

/// Eigen-data of the g1-symmetric map phi defined by g2(x, y) = g1(phi x, y).
template <class Scalar>
struct PhiData {
  Matrix<Scalar> phi;      ///< g1^{-1} g2 in the input basis
  Vector<Scalar> lambdas;  ///< eigenvalues of phi, ascending
  Matrix<Scalar> frame;    ///< columns: g1-orthonormal eigenvectors, in input coordinates
};

/// Solves g2 v = lambda g1 v through g1 = L L^T and the symmetric problem
/// L^{-1} g2 L^{-T}. Inside a (numerically) repeated eigenvalue the frame is
/// fixed by g1-Gram-Schmidt over the projections of the input basis vectors, in
/// input order, so the result does not depend on the eigensolver's choice.
template <class Scalar>
PhiData<Scalar> compute_phi(const Metric<Scalar>& g1, const Metric<Scalar>& g2,
                            Scalar cluster_tol = Scalar(1e-9)) {
  if (g1.dim() != g2.dim()) throw InvalidDimension("compute_phi: metric dimensions differ");
  const Index n = g1.dim();

  const Matrix<Scalar> lower = g1.cholesky().matrixL();
  const auto tri = lower.template triangularView<Eigen::Lower>();
  const Matrix<Scalar> half = tri.solve(g2.matrix());
  const Matrix<Scalar> whitened = tri.solve(half.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(whitened);
  if (eig.info() != Eigen::Success) throw NonPositiveDefinite("compute_phi: eigensolver failed");

  const Vector<Scalar> w = eig.eigenvalues();
  const Matrix<Scalar> vecs = lower.transpose().template triangularView<Eigen::Upper>().solve(eig.eigenvectors());

  PhiData<Scalar> out;
  out.phi = g1.solve(g2.matrix());
  out.lambdas = w;
  out.frame.resize(n, n);

  Index start = 0;
  while (start < n) {
    Index stop = start + 1;
    while (stop < n &&
           std::abs(w(stop) - w(start)) <= cluster_tol * std::max(Scalar(1), std::abs(w(start)))) {
      ++stop;
    }
    const Index size = stop - start;
    const Matrix<Scalar> block = vecs.middleCols(start, size);
    if (size == 1) {
      Index lead = 0;
      block.col(0).cwiseAbs().maxCoeff(&lead);
      out.frame.col(start) = block(lead, 0) < Scalar(0) ? Vector<Scalar>(-block.col(0)) : Vector<Scalar>(block.col(0));
    } else {
      // g1-orthogonal projector onto the eigenspace, applied to e_0, e_1, ...
      const Matrix<Scalar> projector = block * block.transpose() * g1.matrix();
      const Matrix<Scalar> basis = orthonormalize_projections<Scalar>(projector, g1.matrix(), size);
      if (basis.cols() == size) {
        out.frame.middleCols(start, size) = basis;
      } else {
        out.frame.middleCols(start, size) = block;
      }
    }
    start = stop;
  }
  return out;
}

/// The tangent algebra of (g, g1, g2).
///
/// Index convention of the lifted algebra (normalized frame): indices 0..n-1 are
/// the vertical lifts X_i^v / sqrt(lambda_i), indices n..2n-1 the complete
/// lifts X_i^c, where X_i are the columns of PhiData::frame. In this frame the
/// lifted metric is the identity.
template <class Scalar>
class TangentLieAlgebra {
 public:
  TangentLieAlgebra(LieAlgebra<Scalar> input, Metric<Scalar> g1, Metric<Scalar> g2, PhiData<Scalar> phi,
                    LieAlgebra<Scalar> base, LieAlgebra<Scalar> lifted)
      : input_(std::move(input)),
        g1_(std::move(g1)),
        g2_(std::move(g2)),
        phi_(std::move(phi)),
        base_(std::move(base)),
        lifted_(std::move(lifted)),
        lifted_metric_(Metric<Scalar>::identity(lifted_.dim())) {}

  Index base_dim() const { return base_.dim(); }
  Index dim() const { return lifted_.dim(); }

  const LieAlgebra<Scalar>& input() const { return input_; }
  const Metric<Scalar>& g1() const { return g1_; }
  const Metric<Scalar>& g2() const { return g2_; }
  const PhiData<Scalar>& phi_data() const { return phi_; }
  const Vector<Scalar>& lambdas() const { return phi_.lambdas; }
  Vector<Scalar> sqrt_lambdas() const { return phi_.lambdas.array().sqrt(); }

  /// Algebra re-expressed in the eigenframe.
  const LieAlgebra<Scalar>& base() const { return base_; }
  const LieAlgebra<Scalar>& lifted() const { return lifted_; }
  const Metric<Scalar>& lifted_metric() const { return lifted_metric_; }

  MetricLieAlgebra<Scalar> lifted_metric_algebra() const { return {lifted_, lifted_metric_}; }
  /// (base, g1) in the eigenframe, where g1 is the identity.
  MetricLieAlgebra<Scalar> base_first() const { return {base_, Metric<Scalar>::identity(base_dim())}; }
  /// (base, g2) in the eigenframe, where g2 = diag(lambda).
  MetricLieAlgebra<Scalar> base_second() const {
    return {base_, Metric<Scalar>(Matrix<Scalar>(phi_.lambdas.asDiagonal()))};
  }

  /// Input coordinates -> eigenframe coordinates (frame^{-1} = frame^T g1).
  Vector<Scalar> to_frame(const Vector<Scalar>& x) const {
    if (x.size() != base_dim()) throw InvalidDimension("to_frame: vector dimension mismatch");
    return phi_.frame.transpose() * (g1_.matrix() * x);
  }

  /// Columns: normalized lifted frame expressed in the unnormalized lift basis
  /// {X_1^v..X_n^v, X_1^c..X_n^c} of the input basis.
  Matrix<Scalar> lift_frame() const {
    const Index n = base_dim();
    Matrix<Scalar> s = Matrix<Scalar>::Zero(2 * n, 2 * n);
    s.topLeftCorner(n, n) = phi_.frame * sqrt_lambdas().cwiseInverse().asDiagonal();
    s.bottomRightCorner(n, n) = phi_.frame;
    return s;
  }

 private:
  LieAlgebra<Scalar> input_;
  Metric<Scalar> g1_;
  Metric<Scalar> g2_;
  PhiData<Scalar> phi_;
  LieAlgebra<Scalar> base_;
  LieAlgebra<Scalar> lifted_;
  Metric<Scalar> lifted_metric_;
};

inline std::vector<std::string> lifted_labels(Index n) {
  std::vector<std::string> labels;
  for (Index i = 0; i < n; ++i) labels.push_back("v" + std::to_string(i + 1));
  for (Index i = 0; i < n; ++i) labels.push_back("c" + std::to_string(i + 1));
  return labels;
}

/// Brackets of the tangent algebra in the normalized frame, from the lift rules
/// [X^c,Y^c] = [X,Y]^c, [X^c,Y^v] = [X,Y]^v, [X^v,Y^v] = 0.
template <class Scalar>
LieAlgebra<Scalar> lifted_structure(const LieAlgebra<Scalar>& base, const Vector<Scalar>& lambdas) {
  const Index n = base.dim();
  const Vector<Scalar> s = lambdas.array().sqrt();
  Tensor3<Scalar> b(2 * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) {
        const Scalar cijk = base(i, j, k);
        b(n + i, n + j, n + k) = cijk;
        // [X_i^c, Y_j] = sum_k sqrt(l_k)/sqrt(l_j) c_ij^k Y_k, and its negative
        b(n + i, j, k) = s(k) / s(j) * cijk;
        b(j, n + i, k) = -s(k) / s(j) * cijk;
      }
  return LieAlgebra<Scalar>(lifted_labels(n), b);
}

template <class Scalar>
TangentLieAlgebra<Scalar> build_tangent(const LieAlgebra<Scalar>& algebra, const Metric<Scalar>& g1,
                                        const Metric<Scalar>& g2) {
  if (algebra.dim() != g1.dim() || algebra.dim() != g2.dim()) {
    throw InvalidDimension("build_tangent: algebra and metric dimensions differ");
  }
  PhiData<Scalar> phi = compute_phi(g1, g2);
  std::vector<std::string> labels;
  for (Index i = 0; i < algebra.dim(); ++i) labels.push_back("b" + std::to_string(i + 1));
  LieAlgebra<Scalar> base = change_basis_constants(algebra, phi.frame, std::move(labels));
  LieAlgebra<Scalar> lifted = lifted_structure(base, phi.lambdas);
  return TangentLieAlgebra<Scalar>(algebra, g1, g2, std::move(phi), std::move(base), std::move(lifted));
}

/// Brackets of the tangent algebra in the unnormalized lift basis
/// {X_1^v..X_n^v, X_1^c..X_n^c} of the given basis.
template <class Scalar>
LieAlgebra<Scalar> lifted_algebra_unnormalized(const LieAlgebra<Scalar>& a) {
  return lifted_structure(a, Vector<Scalar>(Vector<Scalar>::Ones(a.dim())));
}

/// blockdiag(g2, g1) on {X^v, X^c}.
template <class Scalar>
Matrix<Scalar> lifted_metric_unnormalized(const Metric<Scalar>& g1, const Metric<Scalar>& g2) {
  const Index n = g1.dim();
  Matrix<Scalar> out = Matrix<Scalar>::Zero(2 * n, 2 * n);
  out.topLeftCorner(n, n) = g2.matrix();
  out.bottomRightCorner(n, n) = g1.matrix();
  return out;
}

/// A vector of the tangent algebra, stored in the normalized frame.
template <class Scalar>
class LiftedVector {
 public:
  explicit LiftedVector(Vector<Scalar> coeffs) : coeffs_(std::move(coeffs)) {}

  /// x^c for x given in input coordinates.
  static LiftedVector complete(const TangentLieAlgebra<Scalar>& t, const Vector<Scalar>& x) {
    const Index n = t.base_dim();
    Vector<Scalar> v = Vector<Scalar>::Zero(2 * n);
    v.tail(n) = t.to_frame(x);
    return LiftedVector(std::move(v));
  }

  /// x^v for x given in input coordinates. Since X_i^v = sqrt(lambda_i) * (X_i^v/sqrt(lambda_i)),
  /// eigenframe component i is scaled by sqrt(lambda_i).
  static LiftedVector vertical(const TangentLieAlgebra<Scalar>& t, const Vector<Scalar>& x) {
    const Index n = t.base_dim();
    Vector<Scalar> v = Vector<Scalar>::Zero(2 * n);
    v.head(n) = t.sqrt_lambdas().cwiseProduct(t.to_frame(x));
    return LiftedVector(std::move(v));
  }

  /// x^c + y^v
  static LiftedVector from_parts(const TangentLieAlgebra<Scalar>& t, const Vector<Scalar>& x,
                                 const Vector<Scalar>& y) {
    return complete(t, x) + vertical(t, y);
  }

  const Vector<Scalar>& coeffs() const { return coeffs_; }

  /// x in the unique decomposition x^c + y^v, in input coordinates.
  Vector<Scalar> complete_part(const TangentLieAlgebra<Scalar>& t) const {
    return t.phi_data().frame * coeffs_.tail(t.base_dim());
  }
  Vector<Scalar> vertical_part(const TangentLieAlgebra<Scalar>& t) const {
    return t.phi_data().frame * t.sqrt_lambdas().cwiseInverse().cwiseProduct(coeffs_.head(t.base_dim()));
  }

  friend LiftedVector operator+(const LiftedVector& a, const LiftedVector& b) {
    return LiftedVector(a.coeffs_ + b.coeffs_);
  }
  friend LiftedVector operator*(Scalar s, const LiftedVector& a) { return LiftedVector(s * a.coeffs_); }

 private:
  Vector<Scalar> coeffs_;
};

// ---------------------------------------------------------------------------
// Connection

/// Lifted Levi-Civita connection assembled block by block from the base data:
///   nabla_{X^c} Y^c = (nabla1_X Y)^c
///   nabla_{X^c} Y^v = (nabla2_X Y + (ad2 Y)^* X / 2)^v
///   nabla_{X^v} Y^c = (nabla2_X Y + (ad2 X)^* Y / 2)^v
///   nabla_{X^v} Y^v = (phi(nabla2_X Y - [X,Y]/2))^c
/// `first` and `second` are the Levi-Civita connections of t.base_first() and
/// t.base_second(). The result is in the normalized frame.
template <class Scalar>
Connection<Scalar> lifted_connection_closed_form(const TangentLieAlgebra<Scalar>& t,
                                                 const Connection<Scalar>& first,
                                                 const Connection<Scalar>& second) {
  const Index n = t.base_dim();
  if (first.dim() != n || second.dim() != n) {
    throw InvalidDimension("lifted_connection_closed_form: base connection dimension mismatch");
  }
  const auto& base = t.base();
  const auto m2 = t.base_second();
  const Matrix<Scalar> phi = t.lambdas().asDiagonal();  // phi in its own eigenframe

  std::vector<Matrix<Scalar>> adstar;
  for (Index j = 0; j < n; ++j) adstar.push_back(ad_star(base, m2.metric(), base.basis_vector(j)));

  Tensor3<Scalar> unnormalized(2 * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const Vector<Scalar> g1ij = first.gamma.fiber(i, j);
      const Vector<Scalar> g2ij = second.gamma.fiber(i, j);
      const Vector<Scalar> cc = phi * (g2ij - base.constants().fiber(i, j) / Scalar(2));
      const Vector<Scalar> cv = g2ij + adstar[j].col(i) / Scalar(2);
      const Vector<Scalar> vc = g2ij + adstar[i].col(j) / Scalar(2);
      for (Index k = 0; k < n; ++k) {
        unnormalized(n + i, n + j, n + k) = g1ij(k);
        unnormalized(n + i, j, k) = cv(k);
        unnormalized(i, n + j, k) = vc(k);
        unnormalized(i, j, n + k) = cc(k);
      }
    }

  Matrix<Scalar> scale = Matrix<Scalar>::Identity(2 * n, 2 * n);
  scale.topLeftCorner(n, n) = t.sqrt_lambdas().cwiseInverse().asDiagonal();
  return Connection<Scalar>{change_basis(unnormalized, scale)};
}

template <class Scalar>
Connection<Scalar> lifted_connection_closed_form(const TangentLieAlgebra<Scalar>& t) {
  return lifted_connection_closed_form(t, levi_civita(t.base_first()), levi_civita(t.base_second()));
}

/// Lifted connection written directly in the eigenframe structure constants and
/// the eigenvalues of phi.
template <class Scalar>
Connection<Scalar> lifted_connection_structure_constants(const TangentLieAlgebra<Scalar>& t) {
  const Index n = t.base_dim();
  const auto& c = t.base();
  const Vector<Scalar> s = t.sqrt_lambdas();
  Connection<Scalar> out{Tensor3<Scalar>(2 * n)};
  auto& gam = out.gamma;
  const Scalar half(0.5);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index l = 0; l < n; ++l) {
        gam(i, j, n + l) = half * (s(j) / s(i) * c(l, i, j) - s(i) / s(j) * c(j, l, i));
        gam(n + i, n + j, n + l) = half * (c(i, j, l) - c(j, l, i) + c(l, i, j));
        gam(n + i, j, l) = half * (s(l) / s(j) * c(i, j, l) + s(j) / s(l) * c(l, i, j));
        gam(i, n + j, l) = half * (s(l) / s(i) * c(i, j, l) - s(i) / s(l) * c(j, l, i));
      }
  return out;
}

/// Complete-block coefficients (eigenframe) of nabla_{x^v} y^v:
/// sum_{i,j} mu^i xi^j lambda_k (Gamma2_ij^k - c_ij^k / 2), where x = mu, y = xi
/// are eigenframe coordinates and Gamma2 is the connection of t.base_second().
template <class Scalar>
Vector<Scalar> vertical_vertical_coefficients(const TangentLieAlgebra<Scalar>& t,
                                              const Connection<Scalar>& second, const Vector<Scalar>& x,
                                              const Vector<Scalar>& y) {
  const Index n = t.base_dim();
  if (x.size() != n || y.size() != n) throw InvalidDimension("vertical_vertical_coefficients: size");
  Vector<Scalar> out = Vector<Scalar>::Zero(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const Scalar w = x(i) * y(j);
      if (w == Scalar(0)) continue;
      out += w * (second.gamma.fiber(i, j) - t.base().constants().fiber(i, j) / Scalar(2));
    }
  return t.lambdas().cwiseProduct(out);
}

template <class Scalar>
Vector<Scalar> vertical_vertical_coefficients(const TangentLieAlgebra<Scalar>& t, const Vector<Scalar>& x,
                                              const Vector<Scalar>& y) {
  return vertical_vertical_coefficients(t, levi_civita(t.base_second()), x, y);
}

// ---------------------------------------------------------------------------
// Curvature

/// Blocks of the lifted curvature in the normalized frame; every block maps
/// (i, j, k) in the base index range to output index h of the named lift.
enum class CurvatureBlock {
  ccc_c = 0,  ///< R(X_i^c, X_j^c) X_k^c, complete output
  ccv_v,      ///< R(X_i^c, X_j^c) Y_k,   vertical output
  vcc_v,      ///< R(Y_i, X_j^c) X_k^c,   vertical output
  vvc_c,      ///< R(Y_i, Y_j) X_k^c,     complete output
  vcv_c,      ///< R(Y_i, X_j^c) Y_k,     complete output
  vvv_v,      ///< R(Y_i, Y_j) Y_k,       vertical output
};

inline constexpr std::array<const char*, 6> curvature_block_names{"ccc->c", "ccv->v", "vcc->v",
                                                                  "vvc->c", "vcv->c", "vvv->v"};

/// Extracts one block (as an n^4 tensor) from a full lifted curvature tensor.
template <class Scalar>
Tensor4<Scalar> curvature_block(const CurvatureTensor<Scalar>& full, Index n, CurvatureBlock block) {
  // offsets of (i, j, k, h) slots: 0 for vertical, n for complete
  static constexpr std::array<std::array<int, 4>, 6> kinds{{
      {1, 1, 1, 1}, {1, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}, {0, 1, 0, 1}, {0, 0, 0, 0}}};
  const auto& kind = kinds[static_cast<std::size_t>(block)];
  Tensor4<Scalar> out(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k)
        for (Index h = 0; h < n; ++h)
          out(i, j, k, h) = full.r(i + kind[0] * n, j + kind[1] * n, k + kind[2] * n, h + kind[3] * n);
  return out;
}

/// The six structure-constant curvature formulas, transcribed term by term.
/// Blocks vvc->c and vcv->c carry inconsistent eigenvalue weights as written
/// and are only used for deviation reports.
template <class Scalar>
std::array<Tensor4<Scalar>, 6> curvature_blocks_from_structure_constants(const TangentLieAlgebra<Scalar>& t) {
  const Index n = t.base_dim();
  const auto& c = t.base();
  const Vector<Scalar> s = t.sqrt_lambdas();
  // Koszul combination c_ab^d - c_bd^a + c_da^b
  auto kz = [&](Index a, Index b, Index d) { return c(a, b, d) - c(b, d, a) + c(d, a, b); };

  std::array<Tensor4<Scalar>, 6> out;
  for (auto& blk : out) blk = Tensor4<Scalar>(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k)
        for (Index h = 0; h < n; ++h) {
          std::array<Scalar, 6> acc{};
          for (Index l = 0; l < n; ++l) {
            acc[0] += kz(j, k, l) * kz(i, l, h) - kz(i, k, l) * kz(j, l, h) - 2 * c(i, j, l) * kz(l, k, h);

            acc[1] += (s(l) / s(k) * c(j, k, l) + s(k) / s(l) * c(l, j, k)) *
                          (s(h) / s(l) * c(i, l, h) + s(l) / s(h) * c(h, i, l)) -
                      (s(l) / s(k) * c(i, k, l) + s(k) / s(l) * c(l, i, k)) *
                          (s(h) / s(l) * c(j, l, h) + s(l) / s(h) * c(h, j, l)) -
                      2 * c(i, j, l) * (s(h) / s(k) * c(l, k, h) + s(k) / s(h) * c(h, l, k));

            acc[2] += kz(j, k, l) * (s(h) / s(i) * c(i, l, h) - s(i) / s(h) * c(l, h, i)) -
                      (s(l) / s(i) * c(i, k, l) - s(i) / s(l) * c(k, l, i)) *
                          (s(h) / s(l) * c(j, l, h) + s(l) / s(h) * c(h, j, l)) -
                      2 * s(l) / s(i) * c(i, j, l) * (s(h) / s(l) * c(l, k, h) - s(l) / s(h) * c(k, h, l));

            acc[3] += (s(l) / s(k) * c(j, k, l) - s(j) / s(l) * c(k, l, j)) *
                          (s(l) / s(i) * c(h, i, l) - s(i) / s(l) * c(l, h, i)) -
                      (s(l) / s(i) * c(i, k, l) - s(i) / s(l) * c(k, l, i)) *
                          (s(l) / s(j) * c(h, j, l) - s(j) / s(l) * c(l, h, j));

            acc[4] += (s(l) / s(j) * c(j, k, l) + s(k) / s(l) * c(l, j, k)) *
                          (s(l) / s(i) * c(h, i, l) - s(i) / s(l) * c(l, h, i)) -
                      (s(k) / s(i) * c(l, i, k) - s(i) / s(k) * c(k, l, i)) * kz(j, l, h) -
                      2 * s(k) / s(i) * c(i, j, l) * (s(k) / s(l) * c(h, l, k) - s(l) / s(k) * c(k, h, l));

            acc[5] += (s(k) / s(j) * c(l, j, k) - s(j) / s(k) * c(k, l, j)) *
                          (s(h) / s(i) * c(i, l, h) - s(i) / s(h) * c(l, h, i)) -
                      (s(k) / s(i) * c(l, i, k) - s(i) / s(k) * c(k, l, i)) *
                          (s(h) / s(j) * c(j, l, h) - s(j) / s(h) * c(l, h, j));
          }
          for (std::size_t b = 0; b < 6; ++b) out[b](i, j, k, h) = acc[b] / Scalar(4);
        }
  return out;
}

template <class Scalar>
struct LiftedCurvature {
  CurvatureTensor<Scalar> tensor;          ///< definition applied to the closed-form connection
  std::array<Scalar, 6> block_deviation{};  ///< max |tensor block - structure-constant formula|
};

template <class Scalar>
LiftedCurvature<Scalar> lifted_curvature(const TangentLieAlgebra<Scalar>& t) {
  LiftedCurvature<Scalar> out;
  out.tensor = curvature(t.lifted_metric_algebra(), lifted_connection_closed_form(t));
  const auto formulas = curvature_blocks_from_structure_constants(t);
  for (std::size_t b = 0; b < 6; ++b) {
    const auto block = curvature_block(out.tensor, t.base_dim(), static_cast<CurvatureBlock>(b));
    out.block_deviation[b] = (block.flat() - formulas[b].flat()).cwiseAbs().maxCoeff();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sectional curvature

template <class Scalar>
Scalar lifted_sectional(const TangentLieAlgebra<Scalar>& t, const CurvatureTensor<Scalar>& curv,
                        const LiftedVector<Scalar>& u, const LiftedVector<Scalar>& v) {
  return sectional(t.lifted_metric_algebra(), curv, u.coeffs(), v.coeffs());
}

template <class Scalar>
Scalar lifted_sectional(const TangentLieAlgebra<Scalar>& t, const LiftedVector<Scalar>& u,
                        const LiftedVector<Scalar>& v) {
  return lifted_sectional(t, lifted_curvature(t).tensor, u, v);
}

enum class LiftPair { complete_complete, vertical_vertical, vertical_complete };

/// Closed-form sectional curvature of the plane spanned by two normalized frame
/// vectors built from eigenframe indices i, j (i != j unless vertical_complete).
template <class Scalar>
Scalar pure_lift_sectional(const TangentLieAlgebra<Scalar>& t, LiftPair pair, Index i, Index j) {
  const Index n = t.base_dim();
  const auto& c = t.base();
  const Vector<Scalar>& lam = t.lambdas();
  const Vector<Scalar> s = t.sqrt_lambdas();
  Scalar sum(0);
  for (Index l = 0; l < n; ++l) {
    switch (pair) {
      case LiftPair::complete_complete:
        sum += -4 * c(l, j, j) * c(l, i, i) -
               (c(i, j, l) - c(j, l, i) + c(l, i, j)) * (c(j, l, i) - c(l, i, j) + c(i, j, l)) -
               2 * c(i, j, l) * (c(l, j, i) - c(j, i, l) + c(i, l, j));
        break;
      case LiftPair::vertical_vertical: {
        const Scalar q = s(j) / s(i) * c(l, i, j) + s(i) / s(j) * c(l, j, i);
        sum += q * q - 4 * c(l, j, j) * c(l, i, i);
        break;
      }
      case LiftPair::vertical_complete:
        sum += lam(i) / lam(l) * c(j, l, i) * c(j, l, i) - 3 * lam(l) / lam(i) * c(i, j, l) * c(i, j, l) -
               2 * c(i, j, l) * c(l, j, i) - 4 * c(l, j, j) * c(l, i, i);
        break;
    }
  }
  return sum / Scalar(4);
}

// ---------------------------------------------------------------------------
// Bi-invariance of the lift

template <class Scalar>
struct LiftBiInvariance {
  bool lift_bi_invariant = false;       ///< O'Neill test on the lifted metric
  bool first_bi_invariant = false;      ///< g1 bi-invariant
  bool second_double_bracket = false;   ///< g2([Z,[X,Y]], W) = 0 for all X,Y,Z,W
  bool implication_holds = false;       ///< (first && second) => lift
  Scalar lift_residual = 0;
  Scalar first_residual = 0;
  Scalar second_residual = 0;
};

template <class Scalar>
LiftBiInvariance<Scalar> bi_invariance_of_lift(const TangentLieAlgebra<Scalar>& t, Scalar tol) {
  LiftBiInvariance<Scalar> out;
  out.lift_residual = bi_invariance_defect(t.lifted_metric_algebra());
  out.first_residual = bi_invariance_defect(MetricLieAlgebra<Scalar>(t.input(), t.g1()));
  out.second_residual = double_bracket_defect(MetricLieAlgebra<Scalar>(t.input(), t.g2()));
  out.lift_bi_invariant = out.lift_residual <= tol;
  out.first_bi_invariant = out.first_residual <= tol;
  out.second_double_bracket = out.second_residual <= tol;
  out.implication_holds = !(out.first_bi_invariant && out.second_double_bracket) || out.lift_bi_invariant;
  return out;
}

// ---------------------------------------------------------------------------
// Automorphisms

/// blockdiag(tau2, tau1) on the unnormalized lift basis {X^v, X^c}.
template <class Scalar>
Matrix<Scalar> lift_automorphism(const Matrix<Scalar>& tau1, const Matrix<Scalar>& tau2) {
  if (tau1.rows() != tau1.cols() || tau2.rows() != tau2.cols() || tau1.rows() != tau2.rows()) {
    throw InvalidDimension("lift_automorphism: maps must be square of the same size");
  }
  const Index n = tau1.rows();
  Matrix<Scalar> out = Matrix<Scalar>::Zero(2 * n, 2 * n);
  out.topLeftCorner(n, n) = tau2;
  out.bottomRightCorner(n, n) = tau1;
  return out;
}

/// max |T^T blockdiag(g2, g1) T - blockdiag(tau2^T g2 tau2, tau1^T g1 tau1)| with T the lifted map.
template <class Scalar>
Scalar lifted_pullback_defect(const Metric<Scalar>& g1, const Metric<Scalar>& g2, const Matrix<Scalar>& tau1,
                              const Matrix<Scalar>& tau2) {
  const Matrix<Scalar> big = lift_automorphism(tau1, tau2);
  const Matrix<Scalar> lhs = big.transpose() * lifted_metric_unnormalized(g1, g2) * big;
  const Matrix<Scalar> rhs = lifted_metric_unnormalized(pullback_metric(g1, tau1), pullback_metric(g2, tau2));
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

}  // namespace tanglie
