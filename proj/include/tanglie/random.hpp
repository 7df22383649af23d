#pragma once

#include <cstdint>
#include <random>

#include "tanglie/lie_core.hpp"

namespace tanglie {

/// Reproducible SPD matrices for property sweeps: A^T A / n + floor * I with the
/// entries of A uniform in [-1, 1], drawn from a std::mt19937_64.
template <class Scalar>
class RandomMetricSource {
 public:
  explicit RandomMetricSource(std::uint64_t seed, Scalar floor = Scalar(0.25)) : engine_(seed), floor_(floor) {}

  Matrix<Scalar> spd(Index n) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Matrix<Scalar> a(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) a(i, j) = Scalar(uni(engine_));
    return a.transpose() * a / Scalar(n) + floor_ * Matrix<Scalar>::Identity(n, n);
  }

  Metric<Scalar> metric(Index n) { return Metric<Scalar>(spd(n)); }

  Vector<Scalar> vector(Index n) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Vector<Scalar> v(n);
    for (Index i = 0; i < n; ++i) v(i) = Scalar(uni(engine_));
    return v;
  }

  Scalar uniform(Scalar lo, Scalar hi) {
    return Scalar(std::uniform_real_distribution<double>(double(lo), double(hi))(engine_));
  }

 private:
  std::mt19937_64 engine_;
  Scalar floor_;
};

}  // namespace tanglie
