#include <gtest/gtest.h>

#include <Eigen/SVD>

#include "jre/linalg.hpp"
#include "jre/quantities.hpp"
#include "jre/random.hpp"

using namespace jre;

namespace {

OperatorTuple random_tuple(Index n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<ComplexMatrix> ops;
  for (std::size_t k = 0; k < d; ++k)
    ops.push_back(gaussian_matrix(n, rng));
  return OperatorTuple(std::move(ops));
}

// largest singular value of the d*n x n column stack [T_1; ...; T_d]
double stacked_sigma_max(const OperatorTuple &t) {
  ComplexMatrix s(static_cast<Index>(t.size()) * t.dim(), t.dim());
  for (std::size_t k = 0; k < t.size(); ++k)
    s.middleRows(static_cast<Index>(k) * t.dim(), t.dim()) = t[k];
  Eigen::JacobiSVD<ComplexMatrix> svd(s);
  return svd.singularValues()(0);
}

} // namespace

TEST(OperatorTuple, RejectsEmptyAndRagged) {
  EXPECT_THROW(OperatorTuple(std::vector<ComplexMatrix>{}), ContractViolation);
  EXPECT_THROW(OperatorTuple({ComplexMatrix::Zero(2, 3)}), DimensionMismatch);
  EXPECT_THROW(OperatorTuple({ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(3, 3)}),
               DimensionMismatch);
}

TEST(OperatorTuple, RejectsNonFinite) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(1, 0) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  EXPECT_THROW(OperatorTuple({m}), ContractViolation);
}

TEST(OperatorTuple, ShapeAccessors) {
  const OperatorTuple t = OperatorTuple::identity(3, 4);
  EXPECT_EQ(t.size(), 3u);
  EXPECT_EQ(t.dim(), 4);
  EXPECT_TRUE(t[2].isIdentity());
  EXPECT_TRUE(OperatorTuple::zero(2, 3)[1].isZero());
}

TEST(UnitVector, NormalizesAndFixesPhase) {
  ComplexVector v(3);
  v << Complex(0, 0), Complex(0, 2), Complex(1, 1);
  const UnitVector u(v);
  EXPECT_NEAR(u.coords().norm(), 1.0, 1e-15);
  EXPECT_EQ(u.coords()(1).imag(), 0.0);
  EXPECT_GT(u.coords()(1).real(), 0.0);
  // same ray, different phase -> same representative
  const UnitVector w(v * std::polar(3.0, 1.234));
  EXPECT_LT((u.coords() - w.coords()).norm(), 1e-14);
}

TEST(UnitVector, RejectsZero) {
  EXPECT_THROW(UnitVector(ComplexVector::Zero(3)), ContractViolation);
}

TEST(UnitVector, LexicographicOrder) {
  EXPECT_TRUE(lexicographically_less(UnitVector::basis(2, 1), UnitVector::basis(2, 0)));
  EXPECT_FALSE(lexicographically_less(UnitVector::basis(2, 0), UnitVector::basis(2, 0)));
}

TEST(TupleAlgebra, ElementwiseOperations) {
  const OperatorTuple s = random_tuple(3, 2, 1), t = random_tuple(3, 2, 2);
  const OperatorTuple sum = s + t, prod = s * t, diff = s - t;
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_LT((sum[k] - (s[k] + t[k])).norm(), 1e-14);
    EXPECT_LT((diff[k] - (s[k] - t[k])).norm(), 1e-14);
    EXPECT_LT((prod[k] - s[k] * t[k]).norm(), 1e-13);
  }
  EXPECT_THROW(s + random_tuple(2, 2, 3), DimensionMismatch);
  EXPECT_THROW(s * random_tuple(3, 3, 3), DimensionMismatch);
}

TEST(TupleAlgebra, PowerMatchesRepeatedProduct) {
  const OperatorTuple t = random_tuple(3, 2, 4);
  const OperatorTuple p3 = tuple_power(t, 3);
  for (std::size_t k = 0; k < 2; ++k)
    EXPECT_LT((p3[k] - t[k] * t[k] * t[k]).norm(), 1e-12);
  EXPECT_THROW(tuple_power(t, 0), ContractViolation);
}

TEST(TupleAlgebra, CartesianPartsAreHermitianAndReconstruct) {
  const OperatorTuple t = random_tuple(4, 3, 5);
  const auto [x, y] = cartesian_decompose(t);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_LT((x[k] - x[k].adjoint()).norm(), 1e-14);
    EXPECT_LT((y[k] - y[k].adjoint()).norm(), 1e-14);
    EXPECT_LT((x[k] + Complex(0, 1) * y[k] - t[k]).norm(), 1e-14);
  }
}

TEST(Blocks, LayoutAndSplit) {
  const OperatorTuple x = random_tuple(2, 2, 6), y = random_tuple(2, 2, 7),
                      z = random_tuple(2, 2, 8), w = random_tuple(2, 2, 9);
  const OperatorTuple b = block2x2(x, y, z, w);
  EXPECT_EQ(b.dim(), 4);
  EXPECT_EQ(b.size(), 2u);
  EXPECT_EQ(b[1].topRightCorner(2, 2), y[1]);
  EXPECT_EQ(b[1].bottomLeftCorner(2, 2), z[1]);
  const BlockParts p = split_blocks(b);
  EXPECT_EQ(p.x, x);
  EXPECT_EQ(p.y, y);
  EXPECT_EQ(p.z, z);
  EXPECT_EQ(p.w, w);
}

TEST(JointNorm, MatchesStackedSingularValue) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const OperatorTuple t = random_tuple(1 + static_cast<Index>(s % 5), 1 + s % 4, 100 + s);
    EXPECT_NEAR(joint_norm(t), stacked_sigma_max(t), 1e-12 * stacked_sigma_max(t));
  }
}

TEST(JointNorm, IdentityAndEkk) {
  EXPECT_NEAR(joint_norm(OperatorTuple::identity(3, 2)), std::sqrt(3.0), 1e-14);
  std::vector<ComplexMatrix> e;
  for (int k = 0; k < 3; ++k) {
    ComplexMatrix m = ComplexMatrix::Zero(3, 3);
    m(k, k) = 1.0;
    e.push_back(m);
  }
  EXPECT_NEAR(joint_norm(OperatorTuple(e)), 1.0, 1e-15);
}

TEST(HermitianEigen, RejectsNonHermitian) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(largest_eigenvalue_hermitian(m), ContractViolation);
}

TEST(Commutation, DetectsCommutingAndNormalTuples) {
  Rng rng(11);
  const ComplexMatrix u = random_unitary(3, rng);
  const ComplexMatrix d1 = gaussian_vector(3, rng).asDiagonal();
  const ComplexMatrix d2 = gaussian_vector(3, rng).asDiagonal();
  const OperatorTuple normal({u * d1 * u.adjoint(), u * d2 * u.adjoint()});
  EXPECT_TRUE(is_commuting(normal));
  EXPECT_TRUE(is_normal_tuple(normal));
  const OperatorTuple generic = random_tuple(3, 2, 12);
  EXPECT_FALSE(is_commuting(generic));
  EXPECT_FALSE(is_normal_tuple(generic));
  EXPECT_TRUE(is_commuting(random_tuple(3, 1, 13)));
}

TEST(Commutation, PairCommutesElementwise) {
  const OperatorTuple t = random_tuple(3, 2, 14);
  EXPECT_TRUE(pair_commutes(t, tuple_power(t, 2)));
  EXPECT_FALSE(pair_commutes(t, random_tuple(3, 2, 15)));
}

TEST(RandomUnitary, IsUnitary) {
  Rng rng(16);
  const ComplexMatrix u = random_unitary(5, rng);
  EXPECT_LT((u.adjoint() * u - ComplexMatrix::Identity(5, 5)).norm(), 1e-13);
}

TEST(Seeds, DeriveIsDeterministicAndSpreads) {
  EXPECT_EQ(derive_seed(1, 2), derive_seed(1, 2));
  EXPECT_NE(derive_seed(1, 2), derive_seed(1, 3));
  EXPECT_NE(derive_seed(1, 2), derive_seed(2, 2));
}
