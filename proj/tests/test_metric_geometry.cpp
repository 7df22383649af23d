#include "oracle.hpp"
#include "support.hpp"

using namespace tanglie;
using namespace testing_support;

namespace {

MetricLieAlgebra<double> with_identity(const std::string& name) {
  const auto a = catalog(name);
  return {a, Metric<double>::identity(a.dim())};
}

Vec e(Index n, Index i) { return Vec::Unit(n, i); }

}  // namespace

TEST(MetricLieAlgebra, DimensionMismatch) {
  EXPECT_THROW(MetricLieAlgebra<double>(catalog("heisenberg"), Metric<double>::identity(2)), InvalidDimension);
}

TEST(LeviCivita, HeisenbergIdentityMetric) {
  const auto m = with_identity("heisenberg");
  const auto c = levi_civita(m);
  EXPECT_LE(max_abs(Vec(c.covariant(e(3, 0), e(3, 1)) - 0.5 * e(3, 2))), 1e-15);
  EXPECT_LE(max_abs(Vec(c.covariant(e(3, 0), e(3, 2)) + 0.5 * e(3, 1))), 1e-15);
  EXPECT_LE(max_abs(c.covariant(e(3, 0), e(3, 0))), 1e-15);
}

TEST(LeviCivita, BiInvariantIsHalfBracket) {
  const auto m = with_identity("su2");
  const auto c = levi_civita(m);
  EXPECT_LE((c.gamma.flat() - 0.5 * m.algebra().constants().flat()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(LeviCivita, AbelianIsZero) {
  Gen gen(1);
  const MetricLieAlgebra<double> m(catalog("abelian3"), Metric<double>(gen.spd(3)));
  EXPECT_EQ(levi_civita(m).gamma.max_abs(), 0.0);
}

TEST(LeviCivita, MatchesOracleAndInvariantsOverSweep) {
  Gen gen(101);
  for (const auto& name : catalog_names()) {
    const auto a = catalog(name);
    const auto table = oracle::table_of(a);
    for (int trial = 0; trial < 50; ++trial) {
      const Mat g = gen.spd(a.dim());
      const MetricLieAlgebra<double> m(a, Metric<double>(g));
      const auto c = levi_civita(m);
      const auto ref = oracle::koszul(table, g);
      double diff = 0;
      for (std::size_t q = 0; q < ref.g.size(); ++q) diff = std::max(diff, std::abs(ref.g[q] - c.gamma.data()[q]));
      EXPECT_LE(diff, 1e-10) << name;
      EXPECT_LE(torsion_defect(m, c), 1e-9) << name;
      EXPECT_LE(metric_compatibility_defect(m, c), 1e-9) << name;

      const auto r = curvature(m, c);
      EXPECT_LE(curvature_antisymmetry_defect(r), 1e-8) << name;
      EXPECT_LE(first_bianchi_defect(r), 1e-8) << name;
      EXPECT_LE(pair_symmetry_defect(m, r), 1e-8) << name;
      const Index n = a.dim();
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
          for (Index k = 0; k < n; ++k) {
            const Vec expected = oracle::curvature(table, ref, e(n, i), e(n, j), e(n, k));
            EXPECT_LE(max_abs(Vec(r.apply(e(n, i), e(n, j), e(n, k)) - expected)), 1e-10) << name;
          }
    }
  }
}

TEST(Curvature, AbelianIsZero) {
  const auto m = with_identity("abelian3");
  EXPECT_EQ(curvature(m, levi_civita(m)).r.max_abs(), 0.0);
}

// With R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y] and nabla_X Y = [X,Y]/2 the
// bi-invariant curvature is -[[X,Y],Z]/4, so that K(X,Y) = |[X,Y]|^2 / 4 >= 0.
TEST(Curvature, BiInvariantMinusQuarterDoubleBracket) {
  const auto m = with_identity("su2");
  const auto r = curvature(m, levi_civita(m));
  const auto& a = m.algebra();
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j)
      for (Index k = 0; k < 3; ++k) {
        const Vec expected = -0.25 * bracket(a, bracket(a, e(3, i), e(3, j)), e(3, k));
        EXPECT_LE(max_abs(Vec(r.apply(e(3, i), e(3, j), e(3, k)) - expected)), 1e-15);
      }
}

TEST(Curvature, HeisenbergMilnorValue) {
  const auto m = with_identity("heisenberg");
  const auto r = curvature(m, levi_civita(m));
  EXPECT_NEAR(m.metric().inner(r.apply(e(3, 0), e(3, 1), e(3, 1)), e(3, 0)), -0.75, 1e-15);
}

TEST(Sectional, Examples) {
  const auto h = with_identity("heisenberg");
  EXPECT_NEAR(sectional(h, curvature(h, levi_civita(h)), e(3, 0), e(3, 1)), -0.75, 1e-15);
  const auto s = with_identity("su2");
  EXPECT_NEAR(sectional(s, curvature(s, levi_civita(s)), e(3, 0), e(3, 1)), 0.25, 1e-15);
  Gen gen(2);
  const auto a = with_identity("abelian3");
  EXPECT_EQ(sectional(a, curvature(a, levi_civita(a)), gen.vector(3), gen.vector(3)), 0.0);
}

TEST(Sectional, DegeneratePlaneIsAnError) {
  const auto h = with_identity("heisenberg");
  const auto r = curvature(h, levi_civita(h));
  EXPECT_THROW(sectional(h, r, e(3, 0), Vec(2.0 * e(3, 0))), DegeneratePlane);
  EXPECT_THROW(sectional(h, r, Vec(Vec::Zero(3)), e(3, 1)), DegeneratePlane);
}

TEST(Sectional, InvariantUnderPlaneReparameterization) {
  Gen gen(7);
  for (const auto& name : catalog_names()) {
    const auto a = catalog(name);
    const MetricLieAlgebra<double> m(a, Metric<double>(gen.spd(a.dim())));
    const auto r = curvature(m, levi_civita(m));
    for (int trial = 0; trial < 20; ++trial) {
      const Vec x = gen.vector(a.dim()), y = gen.vector(a.dim());
      double al = gen.uniform(-2, 2), be = gen.uniform(-2, 2), ga = gen.uniform(-2, 2), de = gen.uniform(-2, 2);
      if (std::abs(al * de - be * ga) < 0.1) de += 1.0;
      const double k0 = sectional(m, r, x, y);
      const double k1 = sectional(m, r, Vec(al * x + be * y), Vec(ga * x + de * y));
      EXPECT_NEAR(k0, k1, 1e-8) << name;
    }
  }
}

TEST(BiInvariance, Examples) {
  EXPECT_TRUE(is_bi_invariant(with_identity("su2"), 1e-12));
  EXPECT_FALSE(is_bi_invariant(with_identity("heisenberg"), 1e-12));
  EXPECT_DOUBLE_EQ(bi_invariance_defect(with_identity("heisenberg")), 1.0);
  Gen gen(4);
  EXPECT_TRUE(is_bi_invariant(MetricLieAlgebra<double>(catalog("abelian3"), Metric<double>(gen.spd(3))), 0.0));
}

TEST(BiInvariance, ImpliesHalfBracketConnection) {
  Gen gen(9);
  // su(2) with a scaled identity and in a random orthonormal basis stays bi-invariant
  const auto base = catalog("su2");
  const Mat q = Eigen::HouseholderQR<Mat>(gen.matrix(3)).householderQ();
  const auto rotated = change_basis_constants(base, q);
  for (const auto& m : {MetricLieAlgebra<double>(base, Metric<double>(Mat(3.0 * Mat::Identity(3, 3)))),
                        MetricLieAlgebra<double>(rotated, Metric<double>::identity(3))}) {
    ASSERT_TRUE(is_bi_invariant(m, 1e-10));
    EXPECT_LE((levi_civita(m).gamma.flat() - 0.5 * m.algebra().constants().flat()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(CanonicalMetricity, Examples) {
  EXPECT_EQ(canonical_metricity_defect(with_identity("abelian3")), 0.0);
  EXPECT_LE(canonical_metricity_defect(with_identity("su2")), 1e-15);
  EXPECT_EQ(canonical_metricity_defect(MetricLieAlgebra<double>(catalog("heisenberg"), diag_metric({2, 2, 1}))), 0.0);
}

TEST(DoubleBracketCondition, Examples) {
  Gen gen(6);
  EXPECT_TRUE(satisfies_double_bracket_condition(
      MetricLieAlgebra<double>(catalog("heisenberg"), Metric<double>(gen.spd(3))), 1e-12));
  EXPECT_FALSE(satisfies_double_bracket_condition(with_identity("solvable_rr2"), 1e-12));
  EXPECT_GE(double_bracket_defect(with_identity("solvable_rr2")), 1.0);
  EXPECT_TRUE(satisfies_double_bracket_condition(with_identity("abelian3"), 0.0));
}

TEST(LieDerivative, Examples) {
  EXPECT_EQ(max_abs(lie_derivative_metric(with_identity("abelian3"), Vec(Vec::Ones(3)))), 0.0);
  EXPECT_EQ(max_abs(lie_derivative_metric(with_identity("heisenberg"), e(3, 2))), 0.0);
  const Mat l = lie_derivative_metric(with_identity("solvable_rr2"), e(3, 2));
  EXPECT_LE(max_abs(Mat(l - Mat(Eigen::Vector3d(-2, 2, 0).asDiagonal()))), 1e-15);
}

TEST(ClassifyField, Examples) {
  const auto h = catalog("heisenberg");
  const auto f = classify_field(MetricLieAlgebra<double>(h, metric("heisenberg", "g1")),
                                MetricLieAlgebra<double>(h, metric("heisenberg", "g2")), e(3, 2), 1e-9);
  EXPECT_TRUE(f.first.killing);
  EXPECT_TRUE(f.second.killing);
  EXPECT_TRUE(f.in_center);

  Gen gen(8);
  const auto ab = catalog("abelian2");
  const auto fa = classify_field(MetricLieAlgebra<double>(ab, Metric<double>(gen.spd(2))),
                                 MetricLieAlgebra<double>(ab, Metric<double>(gen.spd(2))), gen.vector(2), 1e-9);
  EXPECT_TRUE(fa.first.killing && fa.first.conformal);
  EXPECT_EQ(fa.first.rho, 0.0);

  const auto s = with_identity("solvable_rr2");
  const auto fs = classify_for_metric(s, e(3, 2), 1e-9);
  EXPECT_FALSE(fs.killing);
  EXPECT_FALSE(fs.conformal);
  EXPECT_GT(fs.conformal_residual, 0.1);
}

TEST(ClassifyField, ConformalFitOnAff1) {
  // L_X g = diag(0, -2): best rho is -1/2 but the fit leaves a residual
  const MetricLieAlgebra<double> m(catalog("aff1"), Metric<double>::identity(2));
  const auto f = classify_for_metric(m, e(2, 0), 1e-9);
  EXPECT_FALSE(f.conformal);
  EXPECT_NEAR(f.rho, -0.5, 1e-15);
}

TEST(ClassifyField, CentralImpliesKillingForEveryMetric) {
  Gen gen(12);
  for (const auto& name : catalog_names()) {
    const auto a = catalog(name);
    for (const auto& z : center(a)) {
      for (int trial = 0; trial < 10; ++trial) {
        const MetricLieAlgebra<double> m(a, Metric<double>(gen.spd(a.dim())));
        EXPECT_TRUE(classify_for_metric(m, z, 1e-9).killing) << name;
      }
    }
  }
}

TEST(Geodesic, Examples) {
  const auto h = with_identity("heisenberg");
  EXPECT_TRUE(is_geodesic_vector(h, levi_civita(h), e(3, 0), 1e-12));
  Gen gen(13);
  const MetricLieAlgebra<double> a(catalog("abelian3"), Metric<double>(gen.spd(3)));
  EXPECT_TRUE(is_geodesic_vector(a, levi_civita(a), gen.vector(3), 0.0));
  const auto s = with_identity("solvable_rr2");
  EXPECT_FALSE(is_geodesic_vector(s, levi_civita(s), Vec(e(3, 0) + e(3, 2)), 1e-6));
}

TEST(Equivariance, IdentityIsExact) {
  const auto m = with_identity("heisenberg");
  const auto d = equivariance_defect(m, m, Mat(Mat::Identity(3, 3)));
  EXPECT_EQ(d.connection, 0.0);
  EXPECT_EQ(d.curvature, 0.0);
  EXPECT_EQ(d.sectional, 0.0);
}

TEST(Equivariance, HeisenbergDiagonalAutomorphism) {
  const auto h = catalog("heisenberg");
  for (const Metric<double>& g : {Metric<double>::identity(3), diag_metric({2, 2, 1})}) {
    const Mat tau = Eigen::Vector3d(2, 3, 6).asDiagonal();
    const MetricLieAlgebra<double> m(h, g);
    const MetricLieAlgebra<double> primed(h, pullback_metric(g, tau));
    const auto d = equivariance_defect(m, primed, tau);
    EXPECT_LE(d.connection, 1e-8);
    EXPECT_LE(d.curvature, 1e-8);
    EXPECT_LE(d.sectional, 1e-8);
  }
}

TEST(Equivariance, NonAutomorphismHasDefect) {
  const auto h = catalog("heisenberg");
  const Mat tau = Eigen::Vector3d(2, 3, 1).asDiagonal();
  const MetricLieAlgebra<double> m(h, Metric<double>::identity(3));
  const MetricLieAlgebra<double> primed(h, pullback_metric(m.metric(), tau));
  const auto d = equivariance_defect(m, primed, tau);
  EXPECT_GT(std::max({d.connection, d.curvature, d.sectional}), 1e-3);
}

TEST(Equivariance, WrongPrimedMetricViolatesPrecondition) {
  const auto m = with_identity("heisenberg");
  EXPECT_THROW(equivariance_defect(m, m, Mat(Eigen::Vector3d(2, 3, 6).asDiagonal())), PreconditionViolated);
}

TEST(Equivariance, RandomAutomorphismsOfConjugatedAlgebras) {
  // b maps the rebased algebra isomorphically onto the original
  Gen gen(14);
  const auto h = catalog("heisenberg");
  const Mat b = gen.invertible(3);
  const auto hb = change_basis_constants(h, b);
  const Mat tau = b.inverse() * Mat(Eigen::Vector3d(0.5, 4, 2).asDiagonal()) * b;
  ASSERT_TRUE(is_automorphism(hb, tau, 1e-10));
  const Metric<double> g(gen.spd(3));
  const MetricLieAlgebra<double> m(hb, g);
  const MetricLieAlgebra<double> primed(hb, pullback_metric(g, tau));
  const auto d = equivariance_defect(m, primed, tau);
  EXPECT_LE(std::max({d.connection, d.curvature, d.sectional}), 1e-8);
}

TEST(LongDouble, MetricGeometryInstantiates) {
  const auto a = make_algebra<long double>({"X", "Y", "Z"}, {{0, 1, 2, 1.0L}});
  const MetricLieAlgebra<long double> m(a, Metric<long double>(Matrix<long double>::Identity(3, 3)));
  const auto c = levi_civita(m);
  const auto r = curvature(m, c);
  const long double k = sectional(m, r, Vector<long double>(a.basis_vector(0)), Vector<long double>(a.basis_vector(1)));
  EXPECT_NEAR(static_cast<double>(k), -0.75, 1e-18);
}
