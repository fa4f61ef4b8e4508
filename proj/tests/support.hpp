#pragma once

#include "anosov/functors.hpp"

#include <cmath>
#include <random>

namespace support {

using namespace anosov;

inline BaseGenerators base(std::vector<Matrix> gens) {
  BaseGenerators b;
  for (std::size_t i = 0; i < gens.size(); ++i) b.labels.push_back(std::string(1, static_cast<char>('a' + i)));
  b.real = std::move(gens);
  return b;
}

// a = diag((3±√5)/2), b = cosh/sinh form with the same trace; axes cross at a right angle.
inline BaseGenerators fuchsian_pair() {
  const double s5 = std::sqrt(5.0);
  Matrix a(2, 2), b(2, 2);
  a << (3 + s5) / 2, 0, 0, (3 - s5) / 2;
  b << 1.5, s5 / 2, s5 / 2, 1.5;
  return base({a, b});
}

// Trace 3, ultraparallel axes, disjoint isometric circles.
inline BaseGenerators schottky_pair() {
  const double s5 = std::sqrt(5.0);
  Matrix a(2, 2), b(2, 2);
  a << 1.5, 1.5 * s5, s5 / 6, 1.5;
  b << 1.5, -s5 / 6, -1.5 * s5, 1.5;
  return base({a, b});
}

inline FunctorStep tau(int d) { return {TauStep{d}}; }

inline FunctorStep direct_sum(FunctorChain a, FunctorChain b) {
  return {DirectSumStep{{std::move(a), std::move(b)}}};
}

inline Representation build(BaseGenerators b, FunctorChain chain = {}) {
  return Representation::from_recipe({std::move(b), std::move(chain)});
}

inline Matrix rotation(double t) {
  Matrix r(2, 2);
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return r;
}

/// P · diag(λ, 1/λ) · P^{-1} with λ uniform in [lo, hi], P a rotation times a
/// shear by t uniform in [-1, 1].
inline Matrix random_hyperbolic_sl2(std::mt19937_64& rng, double lo, double hi, double* lambda = nullptr) {
  std::uniform_real_distribution<double> angle(0.0, 2 * M_PI), mod(lo, hi), shear(-1.0, 1.0);
  const double l = mod(rng);
  if (lambda) *lambda = l;
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = l;
  d(1, 1) = 1 / l;
  // Conjugate so the eigenvalue moduli are exactly λ, 1/λ.
  const Matrix k = rotation(angle(rng));
  Matrix s(2, 2);
  s << 1.0, shear(rng), 0.0, 1.0;
  const Matrix p = k * s;
  return p * d * p.inverse();
}

inline Matrix gaussian(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = n(rng);
  }
  return m;
}

inline Matrix random_pd(std::mt19937_64& rng, int d) {
  const Matrix g = gaussian(rng, d, d);
  return g * g.transpose() + 0.1 * Matrix::Identity(d, d);
}

}  // namespace support
