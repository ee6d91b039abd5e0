#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "jre/linalg.hpp"

namespace jre {

/// SplitMix64 finalizer; used to derive independent sub-stream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix_seed(mix_seed(base) ^ mix_seed(stream + 0x632be59bd9b4e019ULL));
}

using Rng = std::mt19937_64;

/// Standard complex Gaussian: E|z|^2 = 1.
inline Complex complex_gaussian(Rng &rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  const double re = n01(rng);
  const double im = n01(rng);
  return Complex(re, im) * M_SQRT1_2;
}

inline ComplexVector gaussian_vector(Index n, Rng &rng) {
  ComplexVector v(n);
  for (Index i = 0; i < n; ++i)
    v(i) = complex_gaussian(rng);
  return v;
}

inline ComplexMatrix gaussian_matrix(Index n, Rng &rng) {
  ComplexMatrix m(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i)
      m(i, j) = complex_gaussian(rng);
  return m;
}

/// Haar-distributed unitary: QR of a Gaussian matrix with R's diagonal phases
/// pushed into Q.
inline ComplexMatrix random_unitary(Index n, Rng &rng) {
  const ComplexMatrix g = gaussian_matrix(n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix &r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0)
      q.col(j) *= d / mag;
  }
  return q;
}

inline UnitVector random_unit_vector(Index n, Rng &rng) {
  return UnitVector(gaussian_vector(n, rng));
}

} // namespace jre
