#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "jre/quantities.hpp"
#include "jre/sphere_optimizer.hpp"
#include "support.hpp"

using namespace jre;
using jre::testing::random_tuple;

namespace {

ComplexVector random_point(Index n, std::uint64_t seed) {
  Rng rng(seed);
  return random_unit_vector(n, rng).coords();
}

ComplexMatrix hermitian(Index n, std::uint64_t seed) {
  Rng rng(seed);
  const ComplexMatrix g = gaussian_matrix(n, rng);
  return 0.5 * (g + g.adjoint());
}

} // namespace

TEST(Objective, ValueMatchesPlainEvaluation) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const OperatorTuple t = random_tuple(4, 3, s);
    const ComplexVector x = random_point(4, 50 + s);
    EXPECT_NEAR(JointRadiusObjective(t).value(x),
                jre::testing::radius_objective_plain(t, x), 1e-12);
  }
}

TEST(Objective, EuclideanGradientMatchesCentralDifferences) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const OperatorTuple t = random_tuple(2 + static_cast<Index>(s % 3), 1 + s % 3, 200 + s);
    const JointRadiusObjective obj(t);
    const ComplexVector x = random_point(t.dim(), 300 + s);
    ComplexVector g;
    obj.value_and_gradient(x, g);
    const ComplexVector fd = jre::testing::central_difference_gradient(
        [&](const ComplexVector &v) { return obj.value(v); }, x, 1e-5);
    EXPECT_LE((g - fd).norm(), 1e-7 * g.norm()) << "seed " << s;
  }
}

TEST(Objective, NormGradientMatchesCentralDifferences) {
  const OperatorTuple t = random_tuple(3, 2, 7);
  const JointNormObjective obj(t);
  const ComplexVector x = random_point(3, 8);
  ComplexVector g;
  obj.value_and_gradient(x, g);
  const ComplexVector fd = jre::testing::central_difference_gradient(
      [&](const ComplexVector &v) { return obj.value(v); }, x, 1e-5);
  EXPECT_LE((g - fd).norm(), 1e-7 * g.norm());
}

TEST(Objective, PhaseInvariant) {
  const OperatorTuple t = random_tuple(3, 2, 9);
  const JointRadiusObjective obj(t);
  const ComplexVector x = random_point(3, 10);
  for (double phi : {0.3, 1.7, -2.9})
    EXPECT_NEAR(obj.value(std::polar(1.0, phi) * x), obj.value(x), 1e-13);
}

TEST(Tangent, ProjectionIsOrthogonalToPoint) {
  const ComplexVector x = random_point(4, 11);
  const ComplexVector g = random_point(4, 12) * 3.0;
  EXPECT_NEAR(x.dot(tangent_projection(x, g)).real(), 0.0, 1e-14);
}

TEST(Extremize, AcceptedStepsNeverDecreaseObjective) {
  const OperatorTuple t = random_tuple(4, 2, 13);
  double worst = 0.0;
  int steps = 0;
  auto observer = [&](int, double before, double after) {
    worst = std::min(worst, after - before);
    ++steps;
  };
  OptimizerConfig cfg;
  cfg.restarts = 4;
  extremize(JointRadiusObjective(t), Direction::Max, cfg, observer);
  EXPECT_GT(steps, 0);
  EXPECT_GE(worst, -1e-13 * JointRadiusObjective(t).scale());
}

TEST(Extremize, HermitianSingleOperator) {
  // w(A) = max |lambda|; c(A) = 0 for indefinite A, min |lambda| otherwise
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ComplexMatrix a = hermitian(4, 400 + s);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a);
    const auto ev = es.eigenvalues();
    const OperatorTuple t({a});
    const ExtremalResult w = euclidean_radius(t, OptimizerConfig{});
    EXPECT_TRUE(w.converged);
    EXPECT_NEAR(w.value, ev.cwiseAbs().maxCoeff(), 1e-10);
    const double expect_c =
        ev.minCoeff() < 0 && ev.maxCoeff() > 0 ? 0.0 : ev.cwiseAbs().minCoeff();
    EXPECT_NEAR(crawford(t, OptimizerConfig{}).value, expect_c, 1e-7);
  }
}

TEST(Extremize, SingleOperatorMatchesRotationFormula) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const OperatorTuple t = random_tuple(2 + static_cast<Index>(s % 4), 1, 500 + s);
    const ExtremalResult r = euclidean_radius(t, OptimizerConfig{});
    EXPECT_NEAR(r.value, jre::testing::numerical_radius_by_rotation(t[0]), 1e-9)
        << "seed " << s;
  }
}

TEST(Extremize, NilpotentHalf) {
  ComplexMatrix n = ComplexMatrix::Zero(2, 2);
  n(0, 1) = 1.0;
  const OperatorTuple t({n});
  EXPECT_NEAR(euclidean_radius(t, OptimizerConfig{}).value, 0.5, 1e-12);
  EXPECT_NEAR(crawford(t, OptimizerConfig{}).value, 0.0, 1e-8);
}

TEST(Extremize, WitnessReproducesValue) {
  const OperatorTuple t = random_tuple(3, 3, 14);
  const ExtremalResult r = euclidean_radius(t, OptimizerConfig{});
  EXPECT_NEAR(r.witness.coords().norm(), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(
      r.value, std::sqrt(JointRadiusObjective(t).value(r.witness.coords())));
}

TEST(Extremize, UnitaryInvariance) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const OperatorTuple t = random_tuple(4, 2, 600 + s);
    Rng rng(700 + s);
    const ComplexMatrix u = random_unitary(4, rng);
    std::vector<ComplexMatrix> conj;
    for (const auto &m : t)
      conj.push_back(u.adjoint() * m * u);
    EXPECT_NEAR(euclidean_radius(OperatorTuple(conj), OptimizerConfig{}).value,
                euclidean_radius(t, OptimizerConfig{}).value, 1e-9);
  }
}

TEST(Extremize, Homogeneity) {
  const OperatorTuple t = random_tuple(3, 2, 15);
  const Complex alpha(-1.3, 0.7);
  EXPECT_NEAR(euclidean_radius(tuple_scale(alpha, t), OptimizerConfig{}).value,
              std::abs(alpha) * euclidean_radius(t, OptimizerConfig{}).value, 1e-9);
}

TEST(Extremize, CrawfordBelowRadius) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const OperatorTuple t = random_tuple(3, 1 + s % 3, 800 + s);
    EXPECT_LE(crawford(t, OptimizerConfig{}).value,
              euclidean_radius(t, OptimizerConfig{}).value);
  }
}

TEST(Extremize, ZeroTuple) {
  const ExtremalResult r = euclidean_radius(OperatorTuple::zero(2, 3), OptimizerConfig{});
  EXPECT_EQ(r.value, 0.0);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.witness.dim(), 3);
}

TEST(Extremize, Deterministic) {
  const OperatorTuple t = random_tuple(4, 3, 16);
  const ExtremalResult a = euclidean_radius(t, OptimizerConfig{});
  const ExtremalResult b = euclidean_radius(t, OptimizerConfig{});
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.witness.coords(), b.witness.coords());
}

TEST(Extremize, VariationalNormMatchesEigensolve) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const OperatorTuple t = random_tuple(2 + static_cast<Index>(s % 4), 1 + s % 3, 900 + s);
    EXPECT_NEAR(variational_joint_norm(t, OptimizerConfig{}).value, joint_norm(t),
                1e-9 * joint_norm(t));
  }
}

TEST(Config, RejectsInvalidSettings) {
  OptimizerConfig cfg;
  cfg.restarts = 0;
  EXPECT_THROW(cfg.validate(), ContractViolation);
  cfg = {};
  cfg.armijo_c = 1.0;
  EXPECT_THROW(cfg.validate(), ContractViolation);
  cfg = {};
  cfg.grad_tol = -1.0;
  EXPECT_THROW(euclidean_radius(random_tuple(2, 1, 1), cfg), ContractViolation);
}

TEST(RestartPoints, BasisThenRandom) {
  OptimizerConfig cfg;
  cfg.restarts = 8;
  EXPECT_EQ(restart_point(3, 1, cfg), UnitVector::basis(3, 1).coords());
  const ComplexVector r = restart_point(3, 5, cfg);
  EXPECT_EQ(r, restart_point(3, 5, cfg));
  EXPECT_NE(r, restart_point(3, 6, cfg));
}

TEST(GridOracle, AgreesWithOptimizer) {
  for (std::uint64_t s = 0; s < 6; ++s) {
    const OperatorTuple t = random_tuple(2, 1 + s % 3, 1000 + s);
    EXPECT_NEAR(grid_oracle(t, Direction::Max, 0.05),
                euclidean_radius(t, OptimizerConfig{}).value, 1e-6);
    EXPECT_NEAR(grid_oracle(t, Direction::Min, 0.05),
                crawford(t, OptimizerConfig{}).value, 1e-6);
  }
}

TEST(GridOracle, KnownValues) {
  ComplexMatrix n = ComplexMatrix::Zero(2, 2);
  n(0, 1) = 1.0;
  EXPECT_NEAR(grid_oracle(OperatorTuple({n}), Direction::Max, 0.02), 0.5, 1e-9);
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -1.0;
  EXPECT_NEAR(grid_oracle(OperatorTuple({d}), Direction::Max, 0.02), 3.0, 1e-9);
  EXPECT_EQ(grid_oracle(OperatorTuple::zero(1, 2), Direction::Max, 0.02), 0.0);
}

TEST(GridOracle, Preconditions) {
  EXPECT_THROW(grid_oracle(random_tuple(4, 1, 1), Direction::Max, 0.02),
               UnsupportedDimension);
  EXPECT_THROW(grid_oracle(random_tuple(2, 1, 1), Direction::Max, 0.5),
               ContractViolation);
}
