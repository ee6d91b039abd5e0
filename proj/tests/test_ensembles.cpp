#include <gtest/gtest.h>

#include "jre/ensembles.hpp"
#include "jre/quantities.hpp"

using namespace jre;

TEST(Ensembles, GeneralShapeAndDeterminism) {
  const OperatorTuple a = gen_general(4, 3, 7), b = gen_general(4, 3, 7);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 3u);
  EXPECT_EQ(a.dim(), 4);
  EXPECT_FALSE(a == gen_general(4, 3, 8));
}

TEST(Ensembles, CommutingMembersCommute) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const OperatorTuple t = gen_commuting(2 + static_cast<Index>(s % 4), 3, s);
    EXPECT_TRUE(is_commuting(t)) << "seed " << s;
    for (const auto &m : t)
      EXPECT_NEAR(m.norm(), std::sqrt(static_cast<double>(t.dim())), 1e-12);
  }
}

TEST(Ensembles, NormalMembersAreNormalAndCommute) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const OperatorTuple t = gen_normal_commuting(2 + static_cast<Index>(s % 4), 3, s);
    EXPECT_TRUE(is_normal_tuple(t));
  }
}

TEST(Ensembles, SharpnessCases) {
  const OperatorTuple ekk = gen_sharpness(SharpnessCase::Ekk, 3);
  EXPECT_EQ(ekk.size(), 3u);
  EXPECT_EQ(ekk.dim(), 3);
  EXPECT_EQ(ekk[1](1, 1), Complex(1.0, 0.0));
  EXPECT_EQ(ekk[1].norm(), 1.0);

  const OperatorTuple sq = gen_sharpness(SharpnessCase::SqrtDIdentity, 4);
  EXPECT_EQ(sq.size(), 4u);
  EXPECT_NEAR(joint_norm(sq), 4.0, 1e-14);

  const OperatorTuple nil = gen_sharpness(SharpnessCase::NilpotentHalf, 5);
  EXPECT_EQ(nil.size(), 1u);
  EXPECT_EQ(nil.dim(), 2);
  EXPECT_TRUE(tuple_power(nil, 2)[0].isZero());
}

TEST(Ensembles, GenerateDispatch) {
  EnsembleSpec spec{EnsembleKind::Sharpness, 2, 2, 0, std::nullopt};
  EXPECT_EQ(generate(spec, 0, 0), gen_sharpness(SharpnessCase::Ekk, 2));
  EXPECT_EQ(generate(spec, 0, 1), gen_sharpness(SharpnessCase::SqrtDIdentity, 2));
  EXPECT_EQ(generate(spec, 0, 2), gen_sharpness(SharpnessCase::NilpotentHalf, 2));
  spec.case_id = SharpnessCase::Ekk;
  EXPECT_EQ(generate(spec, 0, 2), gen_sharpness(SharpnessCase::Ekk, 2));
  spec = {EnsembleKind::General, 3, 2, 0, std::nullopt};
  EXPECT_EQ(generate(spec, 9), gen_general(3, 2, 9));
}

TEST(Ensembles, NamesRoundTrip) {
  for (auto k : {EnsembleKind::General, EnsembleKind::Commuting, EnsembleKind::Normal,
                 EnsembleKind::Sharpness})
    EXPECT_EQ(parse_ensemble_kind(to_string(k)), k);
  for (auto c : {SharpnessCase::Ekk, SharpnessCase::SqrtDIdentity,
                 SharpnessCase::NilpotentHalf})
    EXPECT_EQ(parse_sharpness_case(to_string(c)), c);
  EXPECT_FALSE(parse_ensemble_kind("gaussian"));
}

TEST(Ensembles, RejectsInvalidSpec) {
  EnsembleSpec spec;
  spec.d = 0;
  EXPECT_THROW(spec.validate(), ContractViolation);
  EXPECT_THROW(gen_sharpness(SharpnessCase::Ekk, 0), ContractViolation);
}
