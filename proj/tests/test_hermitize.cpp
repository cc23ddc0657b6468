#include <gtest/gtest.h>

#include "ipfactor/error.hpp"
#include "ipfactor/hermitize.hpp"
#include "ipfactor/witness.hpp"
#include "oracles.hpp"

using namespace ipfactor;

namespace {

bool all_hermitian(const OpSum& s, double tol) {
  for (const Pair& p : s.pairs())
    if (herm_defect(p.left) / std::max(1.0, p.left.norm()) > tol ||
        herm_defect(p.right) / std::max(1.0, p.right.norm()) > tol)
      return false;
  return true;
}

CMat swap2() {
  CMat c(2, 2);
  c << 0, 1, 1, 0;
  return c;
}

}  // namespace

TEST(ComputeC, EpsilonMapSwapsMiddleTerms) {
  EpsilonMap map = counterexample_map(0.25);
  ConjInvolution c = compute_c(map.opsum);
  CMat expected = CMat::Identity(4, 4);
  expected(1, 1) = expected(2, 2) = 0.0;
  expected(1, 2) = expected(2, 1) = 1.0;
  EXPECT_LT((c.c - expected).norm(), 1e-12);
  EXPECT_LT(c.involution_defect, 1e-12);
}

TEST(ComputeC, SatisfiesBothRelations) {
  oracle::Gen g(41);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 2;
    OpSum s = reduce(OpSum(n, oracle::mixed_self_adjoint(g, n, 1 + t % 4)));
    ConjInvolution c = compute_c(s);
    const auto m = static_cast<Eigen::Index>(s.size());
    for (Eigen::Index k = 0; k < m; ++k) {
      CMat left = CMat::Zero(n, n), right = CMat::Zero(n, n);
      for (Eigen::Index j = 0; j < m; ++j) {
        left += std::conj(c.c(k, j)) * s[j].left;
        right += c.c(j, k) * s[j].right;
      }
      EXPECT_LT((left - s[k].left.adjoint()).norm(), 1e-8 * std::max(1.0, s[k].left.norm()));
      EXPECT_LT((right - s[k].right.adjoint()).norm(), 1e-7 * std::max(1.0, s[k].right.norm()));
    }
    EXPECT_LT((c.c * c.c.conjugate() - CMat::Identity(m, m)).norm(), 1e-8 * m);
  }
}

TEST(ComputeC, RejectsNonSelfAdjoint) {
  oracle::Gen g(42);
  OpSum s(2, {{g.matrix(2), g.matrix(2)}});
  EXPECT_THROW(compute_c(s), NotSelfAdjointError);
}

TEST(ComputeC, RejectsDependentSets) {
  oracle::Gen g(43);
  CMat h = g.hermitian(2), k = g.hermitian(2);
  OpSum s(2, {{h, k}, {h, k}});
  EXPECT_THROW(compute_c(s), HermitizeError);
}

TEST(ConjSqrt, SwapMatrix) {
  ConjSqrt d = conj_sqrt(ConjInvolution{swap2(), 0.0, 0.0});
  EXPECT_LT((d.d * d.d - swap2()).norm(), 1e-8);
  EXPECT_LT((d.d * d.d.conjugate() - CMat::Identity(2, 2)).norm(), 1e-8);
}

TEST(ConjSqrt, RandomUnitaryExponentials) {
  oracle::Gen g(44);
  for (int t = 0; t < 30; ++t) {
    const int m = 2 + t % 3;
    CMat c = mat_exp(Complex(0, 1) * g.real_matrix(m));
    ConjSqrt d = conj_sqrt(ConjInvolution{c, 0.0, 0.0});
    EXPECT_LE((d.d * d.d - c).norm(), 1e-7);
    EXPECT_LE((d.d * d.d.conjugate() - CMat::Identity(m, m)).norm(), 1e-7);
  }
}

TEST(ConjSqrt, RejectsNonInvolution) {
  CMat c = 2.0 * CMat::Identity(2, 2);
  EXPECT_THROW(conj_sqrt(ConjInvolution{c, 0.0, 0.0}), HermitizeError);
}

TEST(Hermitize, EpsilonMapMatchesKnownHermitianForm) {
  for (double e : {0.1, 0.25, 0.4}) {
    EpsilonMap map = counterexample_map(e);
    OpSum h = hermitize(map.opsum);
    EXPECT_EQ(h.size(), 4u);
    EXPECT_TRUE(all_hermitian(h, 1e-10));
    EXPECT_LT(max_unit_deviation(h, map.supermat), 1e-10);
    // Same map as the displayed Hermitian form.
    EXPECT_LT(max_unit_deviation(h, reference_decompositions(e).hermitian), 1e-10);
  }
}

TEST(Hermitize, RandomSelfAdjointMaps) {
  oracle::Gen g(45);
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + t % 2;
    const int m = 1 + t % (n * n);
    OpSum s(n, oracle::mixed_self_adjoint(g, n, m));
    OpSum h = hermitize(reduce(s));
    EXPECT_TRUE(all_hermitian(h, 1e-10));
    EXPECT_LE(h.size(), static_cast<std::size_t>(m));
    EXPECT_LT(oracle::max_deviation(h.pairs(), s.pairs(), n), 1e-8 * std::max(1.0, to_supermat(s).mat().norm()));
    for (const Pair& p : h.pairs()) EXPECT_NEAR(p.left.norm(), p.right.norm(), 1e-9 * p.left.norm());
  }
}

TEST(Hermitize, AlreadyHermitianInputStaysSmall) {
  oracle::Gen g(46);
  OpSum s(2, {{g.hermitian(2), g.hermitian(2)}, {g.hermitian(2), g.hermitian(2)}});
  OpSum h = hermitize(reduce(s));
  EXPECT_EQ(h.size(), 2u);
  EXPECT_TRUE(all_hermitian(h, 1e-10));
}

TEST(HermitizeDoubling, HermitianAndEquivalent) {
  oracle::Gen g(47);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 2;
    OpSum s(n, oracle::mixed_self_adjoint(g, n, 2));
    OpSum h = hermitize_doubling(s);
    EXPECT_TRUE(all_hermitian(h, 1e-10));
    EXPECT_LE(h.size(), 4u);
    EXPECT_LT(oracle::max_deviation(h.pairs(), s.pairs(), n), 1e-8 * std::max(1.0, to_supermat(s).mat().norm()));
  }
}

TEST(HermitianForm, ReportsRoute) {
  oracle::Gen g(48);
  OpSum s(3, oracle::mixed_self_adjoint(g, 3, 5));
  HermitianForm f = hermitian_form(s);
  EXPECT_FALSE(f.used_doubling) << f.fallback_reason;
  EXPECT_TRUE(all_hermitian(f.pairs, 1e-10));
  EXPECT_THROW(hermitian_form(OpSum(2, {{g.matrix(2), g.matrix(2)}})), NotSelfAdjointError);
}

TEST(HermitianForm, ZeroMapIsEmpty) {
  OpSum s(2, {{CMat::Identity(2, 2), CMat::Identity(2, 2)}, {-CMat::Identity(2, 2), CMat::Identity(2, 2)}});
  EXPECT_TRUE(hermitian_form(s).pairs.is_zero_map());
}
