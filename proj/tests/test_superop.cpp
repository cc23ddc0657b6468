#include <gtest/gtest.h>

#include "ipfactor/error.hpp"
#include "ipfactor/superop.hpp"
#include "oracles.hpp"

using namespace ipfactor;

namespace {

OpSum random_opsum(oracle::Gen& g, int n, int m) {
  std::vector<Pair> pairs;
  for (int i = 0; i < m; ++i) pairs.push_back({g.matrix(n), g.matrix(n)});
  return OpSum(n, std::move(pairs));
}

SuperMat random_supermat(oracle::Gen& g, int n) { return SuperMat(n, g.matrix(n * n)); }

SuperMat self_adjoint_supermat(oracle::Gen& g, int n) { return SuperMat(n, g.hermitian(n * n)); }

}  // namespace

TEST(OpSum, RejectsWrongShapes) {
  EXPECT_THROW(OpSum(2, {{CMat::Identity(3, 3), CMat::Identity(2, 2)}}), DimensionError);
  EXPECT_THROW(SuperMat(2, CMat::Identity(3, 3)), DimensionError);
}

TEST(ToSupermat, KroneckerIdentity) {
  // [(A, B)] has supermatrix transpose(B) kron A.
  oracle::Gen g(21);
  for (int t = 0; t < 20; ++t) {
    CMat a = g.matrix(2), b = g.matrix(2);
    SuperMat s = to_supermat(OpSum(2, {{a, b}}));
    EXPECT_LT((s.mat() - oracle::kron_loop(b.transpose(), a)).norm(), 1e-13);
  }
}

TEST(ToSupermat, MatchesMatrixUnitColumns) {
  oracle::Gen g(22);
  for (int n : {1, 2, 3}) {
    OpSum s = random_opsum(g, n, 4);
    EXPECT_LT((to_supermat(s).mat() - oracle::supermat_by_units(s.pairs(), n)).norm(), 1e-12);
  }
}

TEST(ToSupermat, IdentityMap) {
  SuperMat s = to_supermat(OpSum(3, {{CMat::Identity(3, 3), CMat::Identity(3, 3)}}));
  EXPECT_EQ(s.mat(), CMat::Identity(9, 9));
}

TEST(Apply, BothRepresentationsAgree) {
  oracle::Gen g(23);
  OpSum s = random_opsum(g, 3, 5);
  SuperMat m = to_supermat(s);
  for (int t = 0; t < 10; ++t) {
    CMat x = g.matrix(3);
    CMat direct = oracle::apply_direct(s.pairs(), x);
    EXPECT_LT((ipfactor::apply(s, x) - direct).norm(), 1e-12);
    EXPECT_LT((ipfactor::apply(m, x) - direct).norm(), 1e-12);
  }
  EXPECT_THROW(ipfactor::apply(s, CMat::Identity(2, 2)), DimensionError);
}

TEST(Apply, EpsilonMapSupermatrix) {
  const double e = 0.25;
  OpSum s(2, {{CMat(Eigen::Vector2cd(1, e).asDiagonal()), oracle::unit(2, 0, 0)},
              {(1 - e) * oracle::unit(2, 0, 1), oracle::unit(2, 1, 0)},
              {(1 - e) * oracle::unit(2, 1, 0), oracle::unit(2, 0, 1)},
              {CMat(Eigen::Vector2cd(e, 1).asDiagonal()), oracle::unit(2, 1, 1)}});
  CMat expected(4, 4);
  expected << 1, 0, 0, 0.75, 0, 0.25, 0, 0, 0, 0, 0.25, 0, 0.75, 0, 0, 1;
  EXPECT_EQ(to_supermat(s).mat(), expected);
  EXPECT_EQ(realignment_rank(to_supermat(s)), 4);
}

TEST(FromSupermat, RoundTrip) {
  oracle::Gen g(24);
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + t % 3;
    SuperMat s = random_supermat(g, n);
    OpSum pairs = from_supermat(s);
    EXPECT_LE(pairs.size(), static_cast<std::size_t>(n * n));
    EXPECT_LT((to_supermat(pairs).mat() - s.mat()).norm(), 1e-9 * std::max(1.0, s.mat().norm()));
  }
}

TEST(FromSupermat, TermCountIsRealignmentRank) {
  oracle::Gen g(25);
  for (int m = 1; m <= 4; ++m) {
    OpSum s = random_opsum(g, 3, m);
    SuperMat sm = to_supermat(s);
    EXPECT_EQ(realignment_rank(sm), m);
    EXPECT_EQ(from_supermat(sm).size(), static_cast<std::size_t>(m));
  }
}

TEST(FromSupermat, ZeroMapHasNoTerms) {
  EXPECT_TRUE(from_supermat(SuperMat(2, CMat::Zero(4, 4))).is_zero_map());
}

TEST(Reduce, CollapsesProportionalTerms) {
  oracle::Gen g(26);
  for (int t = 0; t < 10; ++t) {
    CMat a = g.matrix(2), b = g.matrix(2);
    OpSum s(2, {{a, b}, {2.0 * a, -b}});
    OpSum r = reduce(s);
    EXPECT_EQ(r.size(), 1u);
    EXPECT_LT(oracle::max_deviation(r.pairs(), {{a, -b}}, 2), 1e-10);
  }
}

TEST(Reduce, KeepsIndependentSets) {
  oracle::Gen g(27);
  OpSum s = random_opsum(g, 3, 4);
  OpSum r = reduce(s);
  EXPECT_EQ(r.size(), 4u);
  EXPECT_LT(oracle::max_deviation(r.pairs(), s.pairs(), 3), 1e-10);
  EXPECT_TRUE(linearly_independent(r.lefts()));
  EXPECT_TRUE(linearly_independent(r.rights()));
}

TEST(ReduceHermitian, KeepsFactorsHermitian) {
  oracle::Gen g(28);
  std::vector<Pair> pairs;
  CMat h = g.hermitian(2), k = g.hermitian(2);
  pairs.push_back({h, k});
  pairs.push_back({2.0 * h, k});
  pairs.push_back({g.hermitian(2), g.hermitian(2)});
  OpSum r = reduce_hermitian(OpSum(2, pairs));
  EXPECT_EQ(r.size(), 2u);
  for (const Pair& p : r.pairs()) {
    EXPECT_LT(herm_defect(p.left), 1e-12);
    EXPECT_LT(herm_defect(p.right), 1e-12);
  }
  EXPECT_LT(oracle::max_deviation(r.pairs(), pairs, 2), 1e-10);
}

TEST(Adjoint, PairingIdentityOnMatrixUnits) {
  // <Phi(X), Y> = <X, Phi*(Y)>
  oracle::Gen g(29);
  for (int n : {2, 3}) {
    OpSum s = random_opsum(g, n, 3);
    OpSum adj = adjoint_superop(s);
    for (int a = 0; a < n * n; ++a)
      for (int b = 0; b < n * n; ++b) {
        CMat x = oracle::unit(n, a % n, a / n), y = oracle::unit(n, b % n, b / n);
        Complex lhs = hs_inner(ipfactor::apply(s, x), y);
        Complex rhs = hs_inner(x, ipfactor::apply(adj, y));
        EXPECT_LT(std::abs(lhs - rhs), 1e-10);
      }
  }
}

TEST(SelfAdjoint, DetectsAsymmetry) {
  oracle::Gen g(30);
  EXPECT_TRUE(is_self_adjoint(self_adjoint_supermat(g, 2)).self_adjoint);
  EXPECT_FALSE(is_self_adjoint(random_supermat(g, 2)).self_adjoint);
  OpSum s = random_opsum(g, 2, 2);
  EXPECT_TRUE(is_self_adjoint(concat(s, adjoint_superop(s))).self_adjoint);
}

TEST(Definiteness, RequiresSelfAdjoint) {
  oracle::Gen g(31);
  EXPECT_THROW(is_positive_definite(random_supermat(g, 2)), NotSelfAdjointError);
}

TEST(Definiteness, AgreesWithSampling) {
  oracle::Gen g(32);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 2;
    SuperMat s = self_adjoint_supermat(g, n);
    if (t % 2 == 0) s = SuperMat(n, s.mat() + (std::abs(oracle::smallest_eigenvalue(s.mat())) + 0.1) *
                                                  CMat::Identity(n * n, n * n));
    DefinitenessReport r = is_positive_definite(s);
    if (r.positive) {
      for (int k = 0; k < 1000; ++k) {
        CMat x = g.matrix(n);
        EXPECT_GT(hs_inner(ipfactor::apply(s, x), x).real(), 0.0);
      }
    } else {
      ASSERT_EQ(r.witness.rows(), n);
      EXPECT_LE(hs_inner(ipfactor::apply(s, r.witness), r.witness).real(), 0.0);
    }
  }
}

TEST(Definiteness, NegativeFactorGivesWitness) {
  CMat d = CMat::Identity(2, 2);
  d(1, 1) = -1.0;
  DefinitenessReport r = is_positive_definite(OpSum(2, {{d, CMat::Identity(2, 2)}}));
  EXPECT_FALSE(r.positive);
  EXPECT_NEAR(r.min_eig, -1.0, 1e-12);
  EXPECT_LT(hs_inner(ipfactor::apply(OpSum(2, {{d, CMat::Identity(2, 2)}}), r.witness), r.witness).real(), 0.0);
}

TEST(RankOnePairing, AgreesWithTraceRoute) {
  // <Phi(x y*), x y*> computed two ways.
  oracle::Gen g(33);
  for (int t = 0; t < 20; ++t) {
    OpSum s = random_opsum(g, 3, 3);
    CVec x = g.vector(3), y = g.vector(3);
    CMat xy = x * y.adjoint();
    Complex expected = hs_inner(ipfactor::apply(s, xy), xy);
    EXPECT_LT(std::abs(rank_one_pairing(s, x, y) - expected), 1e-10 * std::max(1.0, std::abs(expected)));
  }
}

TEST(Independence, DetectsDependentSets) {
  oracle::Gen g(34);
  CMat a = g.matrix(2), b = g.matrix(2);
  EXPECT_TRUE(linearly_independent({a, b}));
  EXPECT_FALSE(linearly_independent({a, b, a - Complex(0, 2) * b}));
  EXPECT_FALSE(linearly_independent({a, CMat::Zero(2, 2)}));
}
