#pragma once

// Reference computations used by the tests. None of them goes through the
// sphere optimizer.

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "jre/linalg.hpp"
#include "jre/random.hpp"

namespace jre::testing {

inline OperatorTuple random_tuple(Index n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<ComplexMatrix> ops;
  for (std::size_t k = 0; k < d; ++k)
    ops.push_back(gaussian_matrix(n, rng));
  return OperatorTuple(std::move(ops));
}

/// lambda_max(Re(e^{i theta} A)) through a dense eigensolve.
inline double rotated_top_eigenvalue(const ComplexMatrix &a, double theta) {
  const ComplexMatrix r = std::polar(1.0, theta) * a;
  const ComplexMatrix h = 0.5 * (r + r.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

/// Classical numerical radius w(A) = max_theta lambda_max(Re(e^{i theta} A)):
/// a 4096-point sweep followed by golden-section refinement of the best cell.
inline double numerical_radius_by_rotation(const ComplexMatrix &a) {
  constexpr int kSweep = 4096;
  const double h = 2.0 * std::numbers::pi / kSweep;
  int best = 0;
  double best_v = -1.0;
  for (int j = 0; j < kSweep; ++j) {
    const double v = rotated_top_eigenvalue(a, j * h);
    if (v > best_v) {
      best_v = v;
      best = j;
    }
  }
  double lo = (best - 1) * h, hi = (best + 1) * h;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 100; ++it) {
    const double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
    if (rotated_top_eigenvalue(a, m1) < rotated_top_eigenvalue(a, m2))
      lo = m1;
    else
      hi = m2;
  }
  return std::max(best_v, rotated_top_eigenvalue(a, 0.5 * (lo + hi)));
}

/// f(x) = sum_k |x^* T_k x|^2 evaluated entry by entry.
inline double radius_objective_plain(const OperatorTuple &t,
                                     const ComplexVector &x) {
  double f = 0.0;
  for (const auto &m : t) {
    Complex q(0.0, 0.0);
    for (Index i = 0; i < x.size(); ++i)
      for (Index j = 0; j < x.size(); ++j)
        q += std::conj(x(i)) * m(i, j) * x(j);
    f += std::norm(q);
  }
  return f;
}

/// Central-difference Euclidean gradient of `f` at x over the 2n real
/// coordinates, written as a complex vector (d/dRe + i d/dIm).
template <class F>
ComplexVector central_difference_gradient(const F &f, const ComplexVector &x,
                                          double h) {
  ComplexVector g(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    double parts[2];
    for (int p = 0; p < 2; ++p) {
      const Complex step = p == 0 ? Complex(h, 0.0) : Complex(0.0, h);
      ComplexVector xp = x, xm = x;
      xp(i) += step;
      xm(i) -= step;
      parts[p] = (f(xp) - f(xm)) / (2.0 * h);
    }
    g(i) = Complex(parts[0], parts[1]);
  }
  return g;
}

/// U diag(lambda_k) U^* for each k from the rows of `eigs`.
inline OperatorTuple normal_tuple_from(const ComplexMatrix &u,
                                       const std::vector<ComplexVector> &eigs) {
  std::vector<ComplexMatrix> ops;
  for (const auto &e : eigs)
    ops.push_back(u * e.asDiagonal() * u.adjoint());
  return OperatorTuple(std::move(ops));
}

} // namespace jre::testing
