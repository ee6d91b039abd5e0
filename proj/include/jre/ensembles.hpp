#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jre/linalg.hpp"
#include "jre/random.hpp"

namespace jre {

enum class EnsembleKind { General, Commuting, Normal, Sharpness };

/// Constructed equality witnesses.
///  Ekk            T_k = E_kk in d dimensions
///  SqrtDIdentity  T_k = sqrt(d) I_d
///  NilpotentHalf  the single 2x2 nilpotent [[0, 1], [0, 0]] (d = 1)
enum class SharpnessCase { Ekk, SqrtDIdentity, NilpotentHalf };

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::General;
  Index n = 2;
  std::size_t d = 1;
  std::uint64_t seed = 0;
  std::optional<SharpnessCase> case_id;

  void validate() const {
    if (n < 1 || d < 1)
      throw ContractViolation("EnsembleSpec: n and d must be at least 1");
  }
};

inline std::string_view to_string(EnsembleKind k) {
  switch (k) {
  case EnsembleKind::General: return "general";
  case EnsembleKind::Commuting: return "commuting";
  case EnsembleKind::Normal: return "normal";
  case EnsembleKind::Sharpness: return "sharpness";
  }
  return "?";
}

inline std::string_view to_string(SharpnessCase c) {
  switch (c) {
  case SharpnessCase::Ekk: return "ekk";
  case SharpnessCase::SqrtDIdentity: return "sqrt_d_identity";
  case SharpnessCase::NilpotentHalf: return "nilpotent_half";
  }
  return "?";
}

inline std::optional<EnsembleKind> parse_ensemble_kind(std::string_view s) {
  for (auto k : {EnsembleKind::General, EnsembleKind::Commuting,
                 EnsembleKind::Normal, EnsembleKind::Sharpness})
    if (s == to_string(k))
      return k;
  return std::nullopt;
}

inline std::optional<SharpnessCase> parse_sharpness_case(std::string_view s) {
  for (auto c : {SharpnessCase::Ekk, SharpnessCase::SqrtDIdentity,
                 SharpnessCase::NilpotentHalf})
    if (s == to_string(c))
      return c;
  return std::nullopt;
}

/// d matrices with i.i.d. standard complex Gaussian entries scaled by 1/sqrt(n).
inline OperatorTuple gen_general(Index n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<ComplexMatrix> ops;
  ops.reserve(d);
  for (std::size_t k = 0; k < d; ++k)
    ops.push_back(s * gaussian_matrix(n, rng));
  return OperatorTuple(std::move(ops));
}

/// T_k = p_k(A) for random polynomials of degree n-1 with complex Gaussian
/// coefficients, each rescaled to Frobenius norm sqrt(n).
inline OperatorTuple commuting_from(const ComplexMatrix &a, std::size_t d,
                                    std::uint64_t seed) {
  const Index n = a.rows();
  Rng rng(seed);
  std::vector<ComplexMatrix> ops;
  ops.reserve(d);
  for (std::size_t k = 0; k < d; ++k) {
    // Horner: p(A) = c_0 I + A (c_1 I + A (...))
    std::vector<Complex> coef(static_cast<std::size_t>(n));
    for (auto &c : coef)
      c = complex_gaussian(rng);
    ComplexMatrix p = coef.back() * ComplexMatrix::Identity(n, n);
    for (std::size_t j = coef.size() - 1; j-- > 0;) {
      p = a * p;
      p.diagonal().array() += coef[j];
    }
    const double f = p.norm();
    if (f > 0)
      p *= std::sqrt(static_cast<double>(n)) / f;
    ops.push_back(std::move(p));
  }
  return OperatorTuple(std::move(ops));
}

inline OperatorTuple gen_commuting(Index n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  const ComplexMatrix a =
      gaussian_matrix(n, rng) / std::sqrt(static_cast<double>(n));
  return commuting_from(a, d, derive_seed(seed, 1));
}

/// T_k = U D_k U^* with independent complex Gaussian diagonals D_k.
inline OperatorTuple normal_from(const ComplexMatrix &u, std::size_t d,
                                 std::uint64_t seed) {
  const Index n = u.rows();
  Rng rng(seed);
  std::vector<ComplexMatrix> ops;
  ops.reserve(d);
  for (std::size_t k = 0; k < d; ++k) {
    const ComplexVector diag = gaussian_vector(n, rng);
    ops.push_back(u * diag.asDiagonal() * u.adjoint());
  }
  return OperatorTuple(std::move(ops));
}

inline OperatorTuple gen_normal_commuting(Index n, std::size_t d,
                                          std::uint64_t seed) {
  Rng rng(seed);
  const ComplexMatrix u = random_unitary(n, rng);
  return normal_from(u, d, derive_seed(seed, 1));
}

/// NilpotentHalf ignores `d` (it is a single operator).
inline OperatorTuple gen_sharpness(SharpnessCase c, std::size_t d) {
  if (d < 1)
    throw ContractViolation("gen_sharpness: d must be at least 1");
  const Index dd = static_cast<Index>(d);
  std::vector<ComplexMatrix> ops;
  switch (c) {
  case SharpnessCase::Ekk:
    for (Index k = 0; k < dd; ++k) {
      ComplexMatrix e = ComplexMatrix::Zero(dd, dd);
      e(k, k) = 1.0;
      ops.push_back(std::move(e));
    }
    break;
  case SharpnessCase::SqrtDIdentity:
    for (Index k = 0; k < dd; ++k)
      ops.push_back(std::sqrt(static_cast<double>(d)) *
                    ComplexMatrix::Identity(dd, dd));
    break;
  case SharpnessCase::NilpotentHalf: {
    ComplexMatrix nil = ComplexMatrix::Zero(2, 2);
    nil(0, 1) = 1.0;
    ops.push_back(std::move(nil));
    break;
  }
  default:
    throw ContractViolation("gen_sharpness: unknown case");
  }
  return OperatorTuple(std::move(ops));
}

/// One tuple drawn from `spec`. For the sharpness kind without an explicit
/// case, `index` cycles through the three cases.
inline OperatorTuple generate(const EnsembleSpec &spec, std::uint64_t seed,
                              std::size_t index = 0) {
  spec.validate();
  switch (spec.kind) {
  case EnsembleKind::General: return gen_general(spec.n, spec.d, seed);
  case EnsembleKind::Commuting: return gen_commuting(spec.n, spec.d, seed);
  case EnsembleKind::Normal: return gen_normal_commuting(spec.n, spec.d, seed);
  case EnsembleKind::Sharpness: {
    const SharpnessCase c =
        spec.case_id.value_or(static_cast<SharpnessCase>(index % 3));
    return gen_sharpness(c, spec.d);
  }
  }
  throw ContractViolation("generate: unknown ensemble kind");
}

} // namespace jre
