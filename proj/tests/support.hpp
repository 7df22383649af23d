#pragma once

#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

#include "tanglie/io.hpp"
#include "tanglie/tanglie.hpp"

namespace testing_support {

using tanglie::Index;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Seeded generator for property sweeps.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  Vec vector(Index n) {
    Vec v(n);
    for (Index i = 0; i < n; ++i) v(i) = uniform(-1.0, 1.0);
    return v;
  }

  Mat matrix(Index n) {
    Mat m(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) m(i, j) = uniform(-1.0, 1.0);
    return m;
  }

  /// Well-conditioned invertible map: identity plus a small perturbation.
  Mat invertible(Index n) { return Mat::Identity(n, n) + 0.4 * matrix(n); }

  Mat spd(Index n) {
    const Mat a = matrix(n);
    return a.transpose() * a / static_cast<double>(n) + 0.25 * Mat::Identity(n, n);
  }

  Mat antisymmetric(Index n) {
    const Mat a = matrix(n);
    return a - a.transpose();
  }

 private:
  std::mt19937_64 rng_;
};

inline tanglie::LieAlgebra<double> catalog(const std::string& name) {
  return tanglie::io::algebra_of(tanglie::io::catalog_algebra(name));
}

inline tanglie::Metric<double> metric(const std::string& name, const std::string& which) {
  return tanglie::io::metric_of(tanglie::io::catalog_algebra(name), which);
}

inline tanglie::Metric<double> diag_metric(std::initializer_list<double> d) {
  Vec v(static_cast<Index>(d.size()));
  Index i = 0;
  for (double x : d) v(i++) = x;
  return tanglie::Metric<double>(Mat(v.asDiagonal()));
}

inline tanglie::TangentLieAlgebra<double> catalog_tangent(const std::string& name) {
  const auto p = tanglie::io::catalog_algebra(name);
  return tanglie::build_tangent(tanglie::io::algebra_of(p), tanglie::io::metric_of(p, "g1"),
                                tanglie::io::metric_of(p, "g2"));
}

/// aff(1) + R^2: [e1,e2] = e2, e3 and e4 central.
inline tanglie::LieAlgebra<double> aff1_plus_r2() {
  return tanglie::make_algebra<double>({"X", "Y", "U", "V"}, {{0, 1, 1, 1.0}});
}

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : static_cast<double>(m.cwiseAbs().maxCoeff());
}

inline const std::vector<std::string>& catalog_names() { return tanglie::io::catalog_names(); }

}  // namespace testing_support
