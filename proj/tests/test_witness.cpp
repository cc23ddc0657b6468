#include <gtest/gtest.h>

#include "ipfactor/error.hpp"
#include "ipfactor/witness.hpp"
#include "oracles.hpp"

using namespace ipfactor;

namespace {

CMat mat2(Complex a, Complex b, Complex c, Complex d) {
  CMat m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST(EpsilonMap, MatrixUnitImages) {
  EpsilonMap map = counterexample_map(0.25);
  EXPECT_EQ(ipfactor::apply(map.opsum, oracle::unit(2, 1, 1)), mat2(0.75, 0, 0, 1));
  EXPECT_EQ(ipfactor::apply(map.opsum, oracle::unit(2, 1, 0)), mat2(0, 0, 0.25, 0));
  EXPECT_EQ(ipfactor::apply(counterexample_map(0.5).opsum, CMat::Identity(2, 2)), mat2(1.5, 0, 0, 1.5));
}

TEST(EpsilonMap, ClosedFormAgreesEverywhere) {
  oracle::Gen g(71);
  for (double e : {0.1, 0.3, 0.5, 0.9}) {
    EpsilonMap map = counterexample_map(e);
    for (int t = 0; t < 20; ++t) {
      CMat x = g.matrix(2);
      EXPECT_LT((ipfactor::apply(map.supermat, x) - epsilon_closed_form(e, x)).norm(), 1e-14 * x.norm() + 1e-15);
    }
  }
}

TEST(EpsilonMap, SelfAdjointPositiveAndMinimal) {
  for (double e : {0.05, 0.25, 0.49, 0.75}) {
    EpsilonMap map = counterexample_map(e);
    EXPECT_TRUE(is_self_adjoint(map.supermat).self_adjoint);
    DefinitenessReport pd = is_positive_definite(map.supermat);
    EXPECT_TRUE(pd.positive);
    EXPECT_NEAR(pd.min_eig, e, 1e-12);
    EXPECT_EQ(from_supermat(map.supermat).size(), 4u);
    EXPECT_EQ(map.in_obstruction_range(), e < 0.5);
  }
}

TEST(EpsilonMap, RejectsOutOfRange) {
  for (double e : {0.0, 1.0, -0.5, 1.5}) EXPECT_THROW(counterexample_map(e), InvalidArgument);
}

TEST(QuadraticForm, Examples) {
  EpsilonMap map = counterexample_map(0.25);
  EXPECT_DOUBLE_EQ(quadratic_form(map, oracle::unit(2, 0, 1)), 0.25);
  for (double e : {0.1, 0.6}) {
    EXPECT_NEAR(quadratic_form(counterexample_map(e), mat2(1, 0, 0, -1)), 2 * e, 1e-15);
  }
}

TEST(QuadraticForm, MatchesTracePairing) {
  oracle::Gen g(72);
  EpsilonMap map = counterexample_map(0.3);
  for (int t = 0; t < 1000; ++t) {
    CMat x = g.matrix(2);
    Complex direct = hs_inner(ipfactor::apply(map.opsum, x), x);
    EXPECT_LT(std::abs(direct - quadratic_form(map, x)), 1e-12 * std::max(1.0, x.squaredNorm()));
  }
}

TEST(ObstructionAudit, MatrixUnitFormFailsPositivity) {
  EpsilonMap map = counterexample_map(0.25);
  AuditReport r = obstruction_audit(map.opsum.pairs(), 0.25);
  EXPECT_EQ(r.failed_step, 1);
}

TEST(ObstructionAudit, UnsignedMinusOneFormFailsReconstruction) {
  Certificate c = *reference_decompositions(0.25).minus_one;
  AuditReport r = obstruction_audit(c.pairs.pairs(), 0.25);
  EXPECT_EQ(r.failed_step, 2);
}

TEST(ObstructionAudit, WrongMapFailsReconstruction) {
  AuditReport r = obstruction_audit({{CMat::Identity(2, 2), CMat::Identity(2, 2)}}, 0.25);
  EXPECT_EQ(r.failed_step, 2);
}

TEST(ObstructionAudit, RequiresTwoByTwo) {
  EXPECT_THROW(obstruction_audit({{CMat::Identity(3, 3), CMat::Identity(3, 3)}}, 0.25), DimensionError);
}

TEST(ObstructionAudit, FuzzedCandidatesNeverPass) {
  // Positive candidates near the map: perturbations of a positive
  // decomposition of a nearby map with a larger epsilon.
  oracle::Gen g(73);
  for (double e : {0.1, 0.25, 0.49}) {
    for (int t = 0; t < 300; ++t) {
      std::vector<Pair> candidate;
      const int m = 1 + t % 6;
      for (int i = 0; i < m; ++i) candidate.push_back({g.positive(2, 0.01), g.positive(2, 0.01)});
      AuditReport r = obstruction_audit(candidate, e);
      EXPECT_TRUE(r.failed_step >= 2 && r.failed_step <= 4) << r.failed_step;
      EXPECT_TRUE(r.chain_holds);
    }
  }
}

TEST(ObstructionAudit, ChainHoldsForPositiveCandidates) {
  oracle::Gen g(74);
  for (int t = 0; t < 100; ++t) {
    std::vector<Pair> candidate{{g.positive(2), g.positive(2)}, {g.positive(2), g.positive(2)}};
    AuditReport r = obstruction_audit(candidate, 0.25);
    EXPECT_GE(r.chain_mean + 1e-12, r.chain_geometric);
    EXPECT_GE(r.chain_geometric + 1e-12, r.chain_products);
    EXPECT_GE(r.chain_products + 1e-12, r.chain_abs_sum);
  }
}

TEST(ObstructionLine, Wording) {
  EXPECT_EQ(obstruction_line(0.25), "0.25 ≥ 0.75 is false → no all-positive form");
  EXPECT_NE(obstruction_line(0.75).find("no conclusion"), std::string::npos);
}

TEST(FsZero, TrivialCases) {
  CMat i = CMat::Identity(2, 2);
  FsReport zero = fs_zero_test({CMat::Zero(2, 2)}, {i});
  EXPECT_TRUE(zero.map_zero);
  EXPECT_TRUE(zero.coefficients_zero);
  FsReport ident = fs_zero_test({i}, {i});
  EXPECT_FALSE(ident.map_zero);
  EXPECT_FALSE(ident.coefficients_zero);
}

TEST(FsZero, EquivalenceOnRandomSets) {
  oracle::Gen g(75);
  for (int t = 0; t < 100; ++t) {
    const int m = 1 + t % 3;
    std::vector<CMat> a, b;
    for (int i = 0; i < m; ++i) {
      a.push_back(t % 4 == 0 ? CMat::Zero(2, 2) : g.matrix(2));
      b.push_back(g.matrix(2));
    }
    FsReport r = fs_zero_test(a, b);
    EXPECT_TRUE(r.equivalent());
    EXPECT_EQ(r.map_zero, t % 4 == 0);
  }
}

TEST(FsZero, RejectsDependentB) {
  CMat i = CMat::Identity(2, 2);
  EXPECT_THROW(fs_zero_test({i, i}, {i, 2.0 * i}), DependentSetError);
}

TEST(FsDependent, DuplicateRightFactor) {
  oracle::Gen g(76);
  CMat a = g.matrix(2), b = g.matrix(2);
  CMat c = CMat::Ones(1, 1);
  FsReport cancel = fs_dependent_test({a, -a}, {b, b}, 1, c);
  EXPECT_TRUE(cancel.map_zero);
  EXPECT_TRUE(cancel.coefficients_zero);
  FsReport keep = fs_dependent_test({a, a}, {b, b}, 1, c);
  EXPECT_FALSE(keep.map_zero);
  EXPECT_FALSE(keep.coefficients_zero);
}

TEST(FsDependent, RelationSatisfiedAndViolated) {
  oracle::Gen g(77);
  for (int t = 0; t < 20; ++t) {
    CMat b1 = g.matrix(2), b2 = g.matrix(2);
    CMat c = CMat::Ones(2, 1);  // B_3 = B_1 + B_2
    CMat a3 = g.matrix(2);
    std::vector<CMat> a{-a3, -a3, a3};
    FsReport ok = fs_dependent_test(a, {b1, b2, b1 + b2}, 2, c);
    EXPECT_LE(ok.map_norm, 1e-10);
    EXPECT_TRUE(ok.equivalent());
    a[0] += 1e-3 * g.matrix(2);
    FsReport bad = fs_dependent_test(a, {b1, b2, b1 + b2}, 2, c);
    EXPECT_GT(bad.map_norm, 1e-6);
    EXPECT_TRUE(bad.equivalent());
  }
}

TEST(FsDependent, RejectsMalformedData) {
  CMat i = CMat::Identity(2, 2);
  CMat x = oracle::unit(2, 0, 1);
  EXPECT_THROW(fs_dependent_test({i, i}, {i, x}, 1, CMat::Ones(1, 1)), InvalidArgument);
  EXPECT_THROW(fs_dependent_test({i, i}, {i, i}, 2, CMat::Ones(1, 1)), InvalidArgument);
  EXPECT_THROW(fs_dependent_test({i, i}, {i, i}, 1, CMat::Ones(2, 1)), InvalidArgument);
}

TEST(ReferenceDecompositions, HermitianFormReproducesMap) {
  for (double e : {0.1, 0.25, 0.4}) {
    ReferenceForms f = reference_decompositions(e);
    EXPECT_LT(max_unit_deviation(f.hermitian, counterexample_map(e).supermat), 1e-12);
    EXPECT_EQ(f.minus_one.has_value(), e == 0.25);
  }
}

TEST(ReferenceDecompositions, QuarterMinusOneCertificate) {
  Certificate c = *reference_decompositions(0.25).minus_one;
  EXPECT_EQ(c.signs, (std::vector<int>{-1, 1, 1, 1}));
  EXPECT_LE(c.residual, 1e-10);
  ASSERT_EQ(c.margins.size(), 8u);
  for (double m : c.margins) EXPECT_GT(m, 0.0);
  EXPECT_GT(min_eig(mat2(1, 2, 2, 16)), 0.0);
}
