#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "jre/errors.hpp"

namespace jre {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline bool all_finite(const ComplexMatrix &m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
        return false;
  return true;
}

/// Ordered list of d >= 1 square complex matrices sharing one dimension.
///
/// Every member is validated at construction (square, common size, finite
/// entries), so downstream code can rely on these invariants without
/// re-checking. Instances are immutable.
class OperatorTuple {
public:
  explicit OperatorTuple(std::vector<ComplexMatrix> ops) : ops_(std::move(ops)) {
    if (ops_.empty())
      throw ContractViolation("OperatorTuple: d must be at least 1");
    dim_ = ops_.front().rows();
    if (dim_ < 1)
      throw ContractViolation("OperatorTuple: dimension must be at least 1");
    for (std::size_t k = 0; k < ops_.size(); ++k) {
      const auto &m = ops_[k];
      if (m.rows() != m.cols())
        throw DimensionMismatch("OperatorTuple: member " + std::to_string(k) +
                                " is not square");
      if (m.rows() != dim_)
        throw DimensionMismatch("OperatorTuple: member " + std::to_string(k) +
                                " has dimension " + std::to_string(m.rows()) +
                                ", expected " + std::to_string(dim_));
      if (!all_finite(m))
        throw ContractViolation("OperatorTuple: member " + std::to_string(k) +
                                " has non-finite entries");
    }
  }

  OperatorTuple(std::initializer_list<ComplexMatrix> ops)
      : OperatorTuple(std::vector<ComplexMatrix>(ops)) {}

  static OperatorTuple zero(std::size_t d, Index dim) {
    return OperatorTuple(
        std::vector<ComplexMatrix>(d, ComplexMatrix::Zero(dim, dim)));
  }

  static OperatorTuple identity(std::size_t d, Index dim) {
    return OperatorTuple(
        std::vector<ComplexMatrix>(d, ComplexMatrix::Identity(dim, dim)));
  }

  std::size_t size() const { return ops_.size(); }
  Index dim() const { return dim_; }

  const ComplexMatrix &operator[](std::size_t k) const { return ops_[k]; }
  std::span<const ComplexMatrix> ops() const { return ops_; }
  auto begin() const { return ops_.begin(); }
  auto end() const { return ops_.end(); }

  friend bool operator==(const OperatorTuple &a, const OperatorTuple &b) {
    if (a.size() != b.size() || a.dim() != b.dim())
      return false;
    for (std::size_t k = 0; k < a.size(); ++k)
      if (a.ops_[k] != b.ops_[k])
        return false;
    return true;
  }

private:
  std::vector<ComplexMatrix> ops_;
  Index dim_ = 0;
};

/// Unit vector in C^n with its global phase fixed: the first coordinate of
/// magnitude above 1e-14 is real and nonnegative.
class UnitVector {
public:
  explicit UnitVector(ComplexVector v) : coords_(std::move(v)) {
    const double nrm = coords_.norm();
    if (coords_.size() == 0 || !std::isfinite(nrm) || nrm == 0.0)
      throw ContractViolation("UnitVector: input must be finite and nonzero");
    coords_ /= nrm;
    for (Index i = 0; i < coords_.size(); ++i) {
      const double mag = std::abs(coords_(i));
      if (mag > 1e-14) {
        coords_ *= std::conj(coords_(i)) / mag;
        coords_(i) = Complex(mag, 0.0);
        break;
      }
    }
  }

  static UnitVector basis(Index dim, Index i) {
    ComplexVector e = ComplexVector::Zero(dim);
    e(i) = 1.0;
    return UnitVector(std::move(e));
  }

  const ComplexVector &coords() const { return coords_; }
  Index dim() const { return coords_.size(); }

private:
  ComplexVector coords_;
};

/// Lexicographic order on (re, im) of successive coordinates.
inline bool lexicographically_less(const UnitVector &a, const UnitVector &b) {
  const Index n = std::min(a.dim(), b.dim());
  for (Index i = 0; i < n; ++i) {
    const Complex x = a.coords()(i), y = b.coords()(i);
    if (x.real() != y.real())
      return x.real() < y.real();
    if (x.imag() != y.imag())
      return x.imag() < y.imag();
  }
  return a.dim() < b.dim();
}

inline ComplexMatrix adjoint(const ComplexMatrix &m) { return m.adjoint(); }

namespace detail {

inline void require_same_shape(const OperatorTuple &a, const OperatorTuple &b,
                               const char *what) {
  if (a.size() != b.size() || a.dim() != b.dim())
    throw DimensionMismatch(std::string(what) + ": tuples have shapes (" +
                            std::to_string(a.size()) + ", " +
                            std::to_string(a.dim()) + ") and (" +
                            std::to_string(b.size()) + ", " +
                            std::to_string(b.dim()) + ")");
}

template <class Fn>
OperatorTuple map_tuple(const OperatorTuple &t, Fn &&fn) {
  std::vector<ComplexMatrix> out;
  out.reserve(t.size());
  for (const auto &m : t)
    out.push_back(fn(m));
  return OperatorTuple(std::move(out));
}

template <class Fn>
OperatorTuple zip_tuple(const OperatorTuple &a, const OperatorTuple &b,
                        const char *what, Fn &&fn) {
  require_same_shape(a, b, what);
  std::vector<ComplexMatrix> out;
  out.reserve(a.size());
  for (std::size_t k = 0; k < a.size(); ++k)
    out.push_back(fn(a[k], b[k]));
  return OperatorTuple(std::move(out));
}

} // namespace detail

inline OperatorTuple tuple_sum(const OperatorTuple &s, const OperatorTuple &t) {
  return detail::zip_tuple(s, t, "tuple_sum",
                           [](const auto &a, const auto &b) -> ComplexMatrix {
                             return a + b;
                           });
}

/// Elementwise product (S_1 T_1, ..., S_d T_d).
inline OperatorTuple tuple_product(const OperatorTuple &s,
                                   const OperatorTuple &t) {
  return detail::zip_tuple(s, t, "tuple_product",
                           [](const auto &a, const auto &b) -> ComplexMatrix {
                             return a * b;
                           });
}

inline OperatorTuple tuple_scale(Complex alpha, const OperatorTuple &t) {
  return detail::map_tuple(
      t, [alpha](const auto &m) -> ComplexMatrix { return alpha * m; });
}

inline OperatorTuple tuple_adjoint(const OperatorTuple &t) {
  return detail::map_tuple(
      t, [](const auto &m) -> ComplexMatrix { return m.adjoint(); });
}

inline ComplexMatrix matrix_power(const ComplexMatrix &m, int n) {
  if (n < 1)
    throw ContractViolation("matrix_power: exponent must be positive");
  ComplexMatrix result = m;
  ComplexMatrix base = m;
  int e = n - 1;
  while (e > 0) {
    if (e & 1)
      result = result * base;
    e >>= 1;
    if (e > 0)
      base = base * base;
  }
  return result;
}

/// (T_1^n, ..., T_d^n).
inline OperatorTuple tuple_power(const OperatorTuple &t, int n) {
  if (n < 1)
    throw ContractViolation("tuple_power: exponent must be positive");
  return detail::map_tuple(
      t, [n](const auto &m) -> ComplexMatrix { return matrix_power(m, n); });
}

inline OperatorTuple operator+(const OperatorTuple &s, const OperatorTuple &t) {
  return tuple_sum(s, t);
}
inline OperatorTuple operator-(const OperatorTuple &s, const OperatorTuple &t) {
  return tuple_sum(s, tuple_scale(-1.0, t));
}
inline OperatorTuple operator-(const OperatorTuple &t) {
  return tuple_scale(-1.0, t);
}
inline OperatorTuple operator*(const OperatorTuple &s, const OperatorTuple &t) {
  return tuple_product(s, t);
}
inline OperatorTuple operator*(Complex alpha, const OperatorTuple &t) {
  return tuple_scale(alpha, t);
}

/// Hermitian parts of T_k = X_k + i Y_k.
struct CartesianParts {
  OperatorTuple real;
  OperatorTuple imag;
};

inline CartesianParts cartesian_decompose(const OperatorTuple &t) {
  const Complex two_i(0.0, 2.0);
  return {detail::map_tuple(t,
                            [](const auto &m) -> ComplexMatrix {
                              return (m + m.adjoint()) * 0.5;
                            }),
          detail::map_tuple(t, [two_i](const auto &m) -> ComplexMatrix {
            return (m - m.adjoint()) / two_i;
          })};
}

/// k-th member is the 2n x 2n matrix [[X_k, Y_k], [Z_k, W_k]].
inline OperatorTuple block2x2(const OperatorTuple &x, const OperatorTuple &y,
                              const OperatorTuple &z, const OperatorTuple &w) {
  detail::require_same_shape(x, y, "block2x2");
  detail::require_same_shape(x, z, "block2x2");
  detail::require_same_shape(x, w, "block2x2");
  const Index n = x.dim();
  std::vector<ComplexMatrix> out;
  out.reserve(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    ComplexMatrix b(2 * n, 2 * n);
    b.topLeftCorner(n, n) = x[k];
    b.topRightCorner(n, n) = y[k];
    b.bottomLeftCorner(n, n) = z[k];
    b.bottomRightCorner(n, n) = w[k];
    out.push_back(std::move(b));
  }
  return OperatorTuple(std::move(out));
}

struct BlockParts {
  OperatorTuple x, y, z, w;
};

/// Inverse of block2x2; requires an even dimension.
inline BlockParts split_blocks(const OperatorTuple &t) {
  if (t.dim() % 2 != 0)
    throw DimensionMismatch("split_blocks: dimension must be even");
  const Index n = t.dim() / 2;
  auto part = [&](Index r, Index c) {
    return detail::map_tuple(t, [&](const auto &m) -> ComplexMatrix {
      return m.block(r, c, n, n);
    });
  };
  return {part(0, 0), part(0, n), part(n, 0), part(n, n)};
}

/// Largest eigenvalue of a Hermitian matrix via a full Hermitian
/// eigendecomposition (Householder tridiagonalization + implicit QR).
/// Throws ContractViolation when ||M - M^*||_F > 1e-10 * max(1, ||M||_F).
inline double largest_eigenvalue_hermitian(const ComplexMatrix &m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw DimensionMismatch("largest_eigenvalue_hermitian: matrix not square");
  const double asym = (m - m.adjoint()).norm();
  if (asym > 1e-10 * std::max(1.0, m.norm()))
    throw ContractViolation("largest_eigenvalue_hermitian: matrix is not "
                            "Hermitian (||M - M*||_F = " +
                            std::to_string(asym) + ")");
  const ComplexMatrix sym = (m + m.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

/// 1e-10 * max(1, max_k ||T_k||_F^2).
inline double default_commute_tol(const OperatorTuple &t) {
  double m = 0.0;
  for (const auto &op : t)
    m = std::max(m, op.squaredNorm());
  return 1e-10 * std::max(1.0, m);
}

/// True iff max_{i,j} ||T_i T_j - T_j T_i||_F <= tol.
inline bool is_commuting(const OperatorTuple &t, double tol) {
  if (!(tol > 0))
    throw ContractViolation("is_commuting: tol must be positive");
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j)
      if ((t[i] * t[j] - t[j] * t[i]).norm() > tol)
        return false;
  return true;
}

inline bool is_commuting(const OperatorTuple &t) {
  return is_commuting(t, default_commute_tol(t));
}

/// Commuting and every member normal (||T_k T_k^* - T_k^* T_k||_F <= tol).
inline bool is_normal_tuple(const OperatorTuple &t, double tol) {
  if (!is_commuting(t, tol))
    return false;
  for (const auto &op : t)
    if ((op * op.adjoint() - op.adjoint() * op).norm() > tol)
      return false;
  return true;
}

inline bool is_normal_tuple(const OperatorTuple &t) {
  return is_normal_tuple(t, default_commute_tol(t));
}

/// S_k T_k = T_k S_k for every k (elementwise commutation of a pair).
inline bool pair_commutes(const OperatorTuple &s, const OperatorTuple &t,
                          double rel_tol = 1e-10) {
  detail::require_same_shape(s, t, "pair_commutes");
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double scale = std::max(1.0, s[k].norm() * t[k].norm());
    if ((s[k] * t[k] - t[k] * s[k]).norm() > rel_tol * scale)
      return false;
  }
  return true;
}

} // namespace jre
