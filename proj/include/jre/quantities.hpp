#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Eigenvalues>

#include "jre/linalg.hpp"
#include "jre/random.hpp"
#include "jre/sphere_optimizer.hpp"

namespace jre {

/// ||T|| = sqrt(lambda_max(sum_k T_k^* T_k)).
inline double joint_norm(const OperatorTuple &t) {
  ComplexMatrix gram = ComplexMatrix::Zero(t.dim(), t.dim());
  for (const auto &m : t)
    gram.noalias() += m.adjoint() * m;
  return std::sqrt(std::max(0.0, largest_eigenvalue_hermitian(gram)));
}

/// sup_{||x||=1} (sum_k ||T_k x||^2)^{1/2} by sphere optimization; a
/// witness-certified lower bound of joint_norm computed without any
/// eigensolver.
inline ExtremalResult variational_joint_norm(const OperatorTuple &t,
                                             const OptimizerConfig &cfg) {
  return extremize(JointNormObjective(t), Direction::Max, cfg);
}

/// Joint numerical radius w_e(T). The value is certified by its witness and
/// is therefore a lower bound of the supremum.
inline ExtremalResult euclidean_radius(const OperatorTuple &t,
                                       const OptimizerConfig &cfg) {
  return extremize_on_sphere(t, Direction::Max, cfg);
}

/// Joint Crawford number c_e(T); witness-certified upper bound of the infimum.
inline ExtremalResult crawford(const OperatorTuple &t,
                               const OptimizerConfig &cfg) {
  return extremize_on_sphere(t, Direction::Min, cfg);
}

/// Joint eigenvalues of a commuting tuple, with algebraic multiplicity.
struct JointSpectrum {
  std::vector<std::vector<Complex>> points;
};

/// Simultaneous upper-triangularization through the Schur basis of a random
/// real combination sum_k c_k T_k. Each draw is accepted only when every
/// Q^* T_k Q has strictly-lower residue <= 1e-7 * max(1, ||T_k||_F); up to
/// eight draws are attempted.
inline JointSpectrum joint_spectrum_commuting(const OperatorTuple &t,
                                              double tol,
                                              std::uint64_t seed = 0x5c4u) {
  if (!is_commuting(t, tol))
    throw ContractViolation("joint_spectrum_commuting: tuple does not commute");
  const Index n = t.dim();
  Rng rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  for (int draw = 0; draw < 8; ++draw) {
    ComplexMatrix c = ComplexMatrix::Zero(n, n);
    for (const auto &m : t)
      c += n01(rng) * m;
    Eigen::ComplexSchur<ComplexMatrix> schur(c);
    if (schur.info() != Eigen::Success)
      continue;
    const ComplexMatrix &q = schur.matrixU();

    std::vector<ComplexMatrix> tri;
    tri.reserve(t.size());
    bool ok = true;
    for (const auto &m : t) {
      ComplexMatrix r = q.adjoint() * m * q;
      const double residue =
          r.triangularView<Eigen::StrictlyLower>().toDenseMatrix().norm();
      if (residue > 1e-7 * std::max(1.0, m.norm())) {
        ok = false;
        break;
      }
      tri.push_back(std::move(r));
    }
    if (!ok)
      continue;

    JointSpectrum js;
    js.points.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
      std::vector<Complex> pt;
      pt.reserve(t.size());
      for (const auto &r : tri)
        pt.push_back(r(i, i));
      js.points.push_back(std::move(pt));
    }
    return js;
  }
  throw TriangularizationFailure(
      "joint_spectrum_commuting: no draw triangularized the tuple");
}

inline JointSpectrum joint_spectrum_commuting(const OperatorTuple &t) {
  return joint_spectrum_commuting(t, default_commute_tol(t));
}

/// r(T): largest Euclidean norm over the joint spectrum.
inline double joint_spectral_radius(const OperatorTuple &t, double tol) {
  const JointSpectrum js = joint_spectrum_commuting(t, tol);
  double r = 0.0;
  for (const auto &pt : js.points) {
    double s = 0.0;
    for (const auto &z : pt)
      s += std::norm(z);
    r = std::max(r, std::sqrt(s));
  }
  return r;
}

inline double joint_spectral_radius(const OperatorTuple &t) {
  return joint_spectral_radius(t, default_commute_tol(t));
}

/// Numerical radius of an entrywise-nonnegative 2x2 real matrix, which equals
/// the spectral radius of its symmetrization:
/// (a + c)/2 + sqrt(((a - c)/2)^2 + s^2),  s = (b12 + b21)/2.
inline double numerical_radius_nonneg2x2(const Eigen::Matrix2d &b) {
  if ((b.array() < 0.0).any() || !b.allFinite())
    throw ContractViolation(
        "numerical_radius_nonneg2x2: entries must be finite and nonnegative");
  const double a = b(0, 0), c = b(1, 1);
  const double s = 0.5 * (b(0, 1) + b(1, 0));
  return 0.5 * (a + c) + std::hypot(0.5 * (a - c), s);
}

/// Spectral norm (largest singular value) of a real 2x2 matrix.
inline double spectral_norm2x2(const Eigen::Matrix2d &m) {
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(m);
  return svd.singularValues()(0);
}

} // namespace jre
