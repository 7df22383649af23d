#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <utility>

#include "tanglie/errors.hpp"
#include "tanglie/lie_core.hpp"
#include "tanglie/tensor.hpp"

namespace tanglie {

/// A Lie algebra together with a left-invariant Riemannian metric.
template <class Scalar>
class MetricLieAlgebra {
 public:
  MetricLieAlgebra(LieAlgebra<Scalar> algebra, Metric<Scalar> metric)
      : algebra_(std::move(algebra)), metric_(std::move(metric)) {
    if (algebra_.dim() != metric_.dim()) {
      throw InvalidDimension("MetricLieAlgebra: metric and algebra dimensions differ");
    }
  }

  Index dim() const { return algebra_.dim(); }
  const LieAlgebra<Scalar>& algebra() const { return algebra_; }
  const Metric<Scalar>& metric() const { return metric_; }

 private:
  LieAlgebra<Scalar> algebra_;
  Metric<Scalar> metric_;
};

/// gamma(i, j, k) = coefficient of X_k in nabla_{X_i} X_j.
template <class Scalar>
struct Connection {
  Tensor3<Scalar> gamma;

  Index dim() const { return gamma.dimension(); }
  /// nabla_x y for constant-coefficient (left-invariant) fields.
  Vector<Scalar> covariant(const Vector<Scalar>& x, const Vector<Scalar>& y) const {
    return contract(gamma, x, y);
  }
};

/// r(i, j, k, h) = coefficient of X_h in R(X_i, X_j) X_k, with
/// R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.
template <class Scalar>
struct CurvatureTensor {
  Tensor4<Scalar> r;

  Index dim() const { return r.dimension(); }
  Vector<Scalar> apply(const Vector<Scalar>& x, const Vector<Scalar>& y, const Vector<Scalar>& z) const {
    return contract(r, x, y, z);
  }
};

/// Levi-Civita connection from the bracket-only Koszul formula
///   2 g(nabla_i X_j, X_k) = g([X_i,X_j],X_k) - g([X_j,X_k],X_i) + g([X_k,X_i],X_j).
/// The derivative terms of the general formula vanish on left-invariant fields.
template <class Scalar>
Connection<Scalar> levi_civita(const MetricLieAlgebra<Scalar>& m) {
  const Index n = m.dim();
  const auto& c = m.algebra().constants();
  const Matrix<Scalar>& g = m.metric().matrix();

  // lowered(i, j, k) = g([X_i, X_j], X_k)
  Tensor3<Scalar> lowered(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const Vector<Scalar> low = g * c.fiber(i, j);
      lowered.set_fiber(i, j, low);
    }

  Connection<Scalar> out{Tensor3<Scalar>(n)};
  Vector<Scalar> rhs(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      for (Index k = 0; k < n; ++k) {
        rhs(k) = (lowered(i, j, k) - lowered(j, k, i) + lowered(k, i, j)) / Scalar(2);
      }
      out.gamma.set_fiber(i, j, m.metric().solve(rhs));
    }
  return out;
}

template <class Scalar>
CurvatureTensor<Scalar> curvature(const MetricLieAlgebra<Scalar>& m, const Connection<Scalar>& conn) {
  const Index n = m.dim();
  if (conn.dim() != n) throw InvalidDimension("curvature: connection dimension mismatch");
  const auto& c = m.algebra().constants();
  const auto& gam = conn.gamma;

  CurvatureTensor<Scalar> out{Tensor4<Scalar>(n)};
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k)
        for (Index h = 0; h < n; ++h) {
          Scalar s(0);
          for (Index l = 0; l < n; ++l) {
            s += gam(j, k, l) * gam(i, l, h) - gam(i, k, l) * gam(j, l, h) - c(i, j, l) * gam(l, k, h);
          }
          out.r(i, j, k, h) = s;
        }
  return out;
}

template <class Scalar>
Scalar sectional(const MetricLieAlgebra<Scalar>& m, const CurvatureTensor<Scalar>& curv,
                 const Vector<Scalar>& x, const Vector<Scalar>& y,
                 Scalar degenerate_tol = Scalar(1e-12)) {
  detail::require_vector(m.algebra(), x, "sectional");
  detail::require_vector(m.algebra(), y, "sectional");
  const auto& g = m.metric();
  const Scalar gram = g.inner(x, x) * g.inner(y, y) - g.inner(x, y) * g.inner(x, y);
  if (!(gram > degenerate_tol)) throw DegeneratePlane("sectional: vectors span a degenerate plane");
  return g.inner(curv.apply(x, y, y), x) / gram;
}

// ---------------------------------------------------------------------------
// Invariant residuals

template <class Scalar>
Scalar torsion_defect(const MetricLieAlgebra<Scalar>& m, const Connection<Scalar>& conn) {
  const Index n = m.dim();
  const auto& c = m.algebra().constants();
  Scalar worst(0);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k)
        worst = std::max(worst, Scalar(std::abs(conn.gamma(i, j, k) - conn.gamma(j, i, k) - c(i, j, k))));
  return worst;
}

/// max |g(nabla_i X_j, X_k) + g(X_j, nabla_i X_k)|
template <class Scalar>
Scalar metric_compatibility_defect(const MetricLieAlgebra<Scalar>& m, const Connection<Scalar>& conn) {
  const Index n = m.dim();
  const Matrix<Scalar>& g = m.metric().matrix();
  Matrix<Scalar> lowered(n, n);
  Scalar worst(0);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) lowered.row(j) = (g * conn.gamma.fiber(i, j)).transpose();
    worst = std::max(worst, (lowered + lowered.transpose()).cwiseAbs().maxCoeff());
  }
  return worst;
}

template <class Scalar>
Scalar curvature_antisymmetry_defect(const CurvatureTensor<Scalar>& curv) {
  const Index n = curv.dim();
  Scalar worst(0);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k)
        for (Index h = 0; h < n; ++h)
          worst = std::max(worst, Scalar(std::abs(curv.r(i, j, k, h) + curv.r(j, i, k, h))));
  return worst;
}

template <class Scalar>
Scalar first_bianchi_defect(const CurvatureTensor<Scalar>& curv) {
  const Index n = curv.dim();
  Scalar worst(0);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k)
        for (Index h = 0; h < n; ++h) {
          const Scalar s = curv.r(i, j, k, h) + curv.r(j, k, i, h) + curv.r(k, i, j, h);
          worst = std::max(worst, Scalar(std::abs(s)));
        }
  return worst;
}

/// max |g(R(X_i,X_j)X_k, X_l) - g(R(X_k,X_l)X_i, X_j)|
template <class Scalar>
Scalar pair_symmetry_defect(const MetricLieAlgebra<Scalar>& m, const CurvatureTensor<Scalar>& curv) {
  const Index n = m.dim();
  const Matrix<Scalar>& g = m.metric().matrix();
  Tensor4<Scalar> low(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) {
        const Vector<Scalar> v = g * curv.r.fiber(i, j, k);
        for (Index l = 0; l < n; ++l) low(i, j, k, l) = v(l);
      }
  Scalar worst(0);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k)
        for (Index l = 0; l < n; ++l)
          worst = std::max(worst, Scalar(std::abs(low(i, j, k, l) - low(k, l, i, j))));
  return worst;
}

// ---------------------------------------------------------------------------
// Bi-invariance and double-bracket conditions

/// max |g(X_i, [X_j, X_k]) - g([X_i, X_j], X_k)|
template <class Scalar>
Scalar bi_invariance_defect(const MetricLieAlgebra<Scalar>& m) {
  const Index n = m.dim();
  const auto& c = m.algebra().constants();
  const Matrix<Scalar>& g = m.metric().matrix();
  Scalar worst(0);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) {
        const Scalar lhs = g.row(i).dot(c.fiber(j, k));
        const Scalar rhs = c.fiber(i, j).dot(g.col(k));
        worst = std::max(worst, Scalar(std::abs(lhs - rhs)));
      }
  return worst;
}

template <class Scalar>
bool is_bi_invariant(const MetricLieAlgebra<Scalar>& m, Scalar tol) {
  return bi_invariance_defect(m) <= tol;
}

namespace detail {

/// dbl(i, j, k, :) = [X_k, [X_i, X_j]]
template <class Scalar>
Tensor4<Scalar> double_brackets(const LieAlgebra<Scalar>& a) {
  const Index n = a.dim();
  Tensor4<Scalar> out(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const Vector<Scalar> inner = a.constants().fiber(i, j);
      for (Index k = 0; k < n; ++k) {
        const Vector<Scalar> v = bracket<Scalar>(a, a.basis_vector(k), inner);
        for (Index h = 0; h < n; ++h) out(i, j, k, h) = v(h);
      }
    }
  return out;
}

}  // namespace detail

/// Residual of metricity for the canonical connection nabla_X Y = [X,Y]/2:
/// max |g([X_k,[X_i,X_j]], X_l) + g(X_k, [X_l,[X_i,X_j]])|.
template <class Scalar>
Scalar canonical_metricity_defect(const MetricLieAlgebra<Scalar>& m) {
  const Index n = m.dim();
  const Matrix<Scalar>& g = m.metric().matrix();
  const Tensor4<Scalar> dbl = detail::double_brackets(m.algebra());
  Scalar worst(0);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k)
        for (Index l = 0; l < n; ++l) {
          const Scalar s = dbl.fiber(i, j, k).dot(g.col(l)) + g.row(k).dot(dbl.fiber(i, j, l));
          worst = std::max(worst, Scalar(std::abs(s)));
        }
  return worst;
}

/// max |g([X_k,[X_i,X_j]], X_l)|; zero exactly when all double brackets vanish.
template <class Scalar>
Scalar double_bracket_defect(const MetricLieAlgebra<Scalar>& m) {
  const Index n = m.dim();
  const Matrix<Scalar>& g = m.metric().matrix();
  const Tensor4<Scalar> dbl = detail::double_brackets(m.algebra());
  Scalar worst(0);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k)
        worst = std::max(worst, (g * dbl.fiber(i, j, k)).cwiseAbs().maxCoeff());
  return worst;
}

template <class Scalar>
bool satisfies_double_bracket_condition(const MetricLieAlgebra<Scalar>& m, Scalar tol) {
  return double_bracket_defect(m) <= tol;
}

// ---------------------------------------------------------------------------
// Vector-field classification

/// (L_x g)(X_i, X_j) = -g([x,X_i], X_j) - g(X_i, [x,X_j]) on a left-invariant frame.
template <class Scalar>
Matrix<Scalar> lie_derivative_metric(const MetricLieAlgebra<Scalar>& m, const Vector<Scalar>& x) {
  const Matrix<Scalar> ad = ad_matrix(m.algebra(), x);
  const Matrix<Scalar> half = ad.transpose() * m.metric().matrix();
  return -(half + half.transpose());
}

template <class Scalar>
struct MetricFieldReport {
  bool killing = false;
  bool conformal = false;
  Scalar rho = 0;                 ///< least-squares factor in L_x g = 2 rho g
  Scalar killing_residual = 0;    ///< max |L_x g|
  Scalar conformal_residual = 0;  ///< relative Frobenius residual of the fit
};

template <class Scalar>
MetricFieldReport<Scalar> classify_for_metric(const MetricLieAlgebra<Scalar>& m, const Vector<Scalar>& x,
                                              Scalar tol) {
  const Matrix<Scalar> lie = lie_derivative_metric(m, x);
  const Matrix<Scalar> twice_g = Scalar(2) * m.metric().matrix();

  MetricFieldReport<Scalar> out;
  out.killing_residual = lie.cwiseAbs().maxCoeff();
  out.killing = out.killing_residual <= tol;
  out.rho = (lie.array() * twice_g.array()).sum() / twice_g.squaredNorm();
  const Scalar scale = std::max(lie.norm(), twice_g.norm());
  out.conformal_residual = (lie - out.rho * twice_g).norm() / scale;
  out.conformal = out.conformal_residual <= tol;
  return out;
}

template <class Scalar>
struct FieldClassification {
  MetricFieldReport<Scalar> first;
  MetricFieldReport<Scalar> second;
  bool in_center = false;
  Scalar center_residual = 0;  ///< max_i |[X_i, x]|
};

template <class Scalar>
Scalar center_residual(const LieAlgebra<Scalar>& a, const Vector<Scalar>& x) {
  Scalar worst(0);
  for (Index i = 0; i < a.dim(); ++i) {
    worst = std::max(worst, bracket(a, a.basis_vector(i), x).cwiseAbs().maxCoeff());
  }
  return worst;
}

template <class Scalar>
FieldClassification<Scalar> classify_field(const MetricLieAlgebra<Scalar>& first,
                                           const MetricLieAlgebra<Scalar>& second, const Vector<Scalar>& x,
                                           Scalar tol) {
  if (first.dim() != second.dim()) throw InvalidDimension("classify_field: dimension mismatch");
  FieldClassification<Scalar> out;
  out.first = classify_for_metric(first, x, tol);
  out.second = classify_for_metric(second, x, tol);
  out.center_residual = center_residual(first.algebra(), x);
  out.in_center = out.center_residual <= tol;
  return out;
}

/// Metric norm of nabla_x x.
template <class Scalar>
Scalar geodesic_defect(const MetricLieAlgebra<Scalar>& m, const Connection<Scalar>& conn,
                       const Vector<Scalar>& x) {
  detail::require_vector(m.algebra(), x, "geodesic_defect");
  const Vector<Scalar> v = conn.covariant(x, x);
  return std::sqrt(std::max(Scalar(0), m.metric().inner(v, v)));
}

template <class Scalar>
bool is_geodesic_vector(const MetricLieAlgebra<Scalar>& m, const Connection<Scalar>& conn,
                        const Vector<Scalar>& x, Scalar tol) {
  return geodesic_defect(m, conn, x) <= tol;
}

// ---------------------------------------------------------------------------
// Equivalence under automorphisms

template <class Scalar>
struct EquivarianceDefect {
  Scalar connection = 0;
  Scalar curvature = 0;
  Scalar sectional = 0;
};

/// Residuals of tau(nabla'_X Y) = nabla_{tau X} tau Y, the matching curvature
/// identity, and K'(X,Y) = K(tau X, tau Y) over basis tuples, where the
/// metric of `primed` must equal tau^T g tau.
template <class Scalar>
EquivarianceDefect<Scalar> equivariance_defect(const MetricLieAlgebra<Scalar>& m,
                                               const MetricLieAlgebra<Scalar>& primed,
                                               const Matrix<Scalar>& tau, Scalar tol = Scalar(1e-8)) {
  const Index n = m.dim();
  if (primed.dim() != n) throw InvalidDimension("equivariance_defect: dimension mismatch");
  detail::require_square(m.algebra(), tau, "equivariance_defect");
  const Matrix<Scalar> expected = tau.transpose() * m.metric().matrix() * tau;
  const Scalar scale = std::max(Scalar(1), expected.cwiseAbs().maxCoeff());
  if ((primed.metric().matrix() - expected).cwiseAbs().maxCoeff() > tol * scale) {
    throw PreconditionViolated("equivariance_defect: primed metric is not the pullback by tau");
  }

  const auto conn = levi_civita(m);
  const auto conn_p = levi_civita(primed);
  const auto curv = curvature(m, conn);
  const auto curv_p = curvature(primed, conn_p);

  EquivarianceDefect<Scalar> out;
  for (Index i = 0; i < n; ++i) {
    const Vector<Scalar> ti = tau.col(i);
    for (Index j = 0; j < n; ++j) {
      const Vector<Scalar> tj = tau.col(j);
      const Vector<Scalar> lhs = tau * conn_p.gamma.fiber(i, j);
      out.connection = std::max(out.connection, (lhs - conn.covariant(ti, tj)).cwiseAbs().maxCoeff());
      for (Index k = 0; k < n; ++k) {
        const Vector<Scalar> lr = tau * curv_p.r.fiber(i, j, k);
        const Vector<Scalar> rr = curv.apply(ti, tj, Vector<Scalar>(tau.col(k)));
        out.curvature = std::max(out.curvature, (lr - rr).cwiseAbs().maxCoeff());
      }
      if (i < j) {
        const Scalar kp = sectional(primed, curv_p, primed.algebra().basis_vector(i),
                                    primed.algebra().basis_vector(j));
        const Scalar k0 = sectional(m, curv, ti, tj);
        out.sectional = std::max(out.sectional, Scalar(std::abs(kp - k0)));
      }
    }
  }
  return out;
}

}  // namespace tanglie
