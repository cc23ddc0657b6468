#ifndef IPFACTOR_SUPEROP_HPP
#define IPFACTOR_SUPEROP_HPP

// Linear maps on n x n complex matrices, in two representations:
//
//   OpSum     X -> sum_i left_i X right_i
//   SuperMat  vec(A(X)) = M vec(X), column-stacking vec
//
// Under column stacking vec(L X R) = (R^T kron L) vec(X). The realignment of M
// used by from_supermat is R[i n + j, k n + l] = M[k n + i, l n + j]
// (0-based), which turns every term L X R into the rank-one matrix
// rowvec(L) vec(R)^T, so its rank is the minimal number of terms.

#include <cstddef>
#include <vector>

#include "ipfactor/matspace.hpp"

namespace ipfactor {

struct Pair {
  CMat left;
  CMat right;
};

class OpSum {
 public:
  /// Throws DimensionError/InvalidArgument on malformed pairs.
  OpSum(int dim, std::vector<Pair> pairs);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] const std::vector<Pair>& pairs() const { return pairs_; }
  [[nodiscard]] std::size_t size() const { return pairs_.size(); }
  [[nodiscard]] const Pair& operator[](std::size_t i) const { return pairs_[i]; }

  /// The map with no terms; representable but never an inner product.
  [[nodiscard]] bool is_zero_map() const { return pairs_.empty(); }

  [[nodiscard]] std::vector<CMat> lefts() const;
  [[nodiscard]] std::vector<CMat> rights() const;

 private:
  int dim_;
  std::vector<Pair> pairs_;
};

class SuperMat {
 public:
  SuperMat(int dim, CMat mat);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] const CMat& mat() const { return mat_; }

 private:
  int dim_;
  CMat mat_;
};

CMat apply(const OpSum& s, const CMat& x);
CMat apply(const SuperMat& s, const CMat& x);

/// Sum of both term lists.
OpSum concat(const OpSum& a, const OpSum& b);

SuperMat to_supermat(const OpSum& s);

/// The realignment matrix described at the top of this header.
CMat realign(const SuperMat& s);

/// Number of realignment singular values above rank_cutoff * sigma_max.
int realignment_rank(const SuperMat& s);

/// Minimal operator sum from the singular value decomposition of the
/// realignment. Each retained triple (sigma, u, v) gives
/// left = sqrt(sigma) * rowunvec(u), right = sqrt(sigma) * unvec(conj(v)),
/// with the phase of u fixed so its first significant entry is real positive.
/// The zero map yields an empty OpSum.
OpSum from_supermat(const SuperMat& s);

/// Equivalent OpSum with linearly independent left and right sets.
OpSum reduce(const OpSum& s);

/// Like reduce, but for an OpSum of Hermitian pairs: the result is again made
/// of Hermitian pairs and has the minimal number of terms. Works in real
/// coordinates of an orthonormal Hermitian basis, where the coefficient matrix
/// is real and its real SVD yields Hermitian factors.
OpSum reduce_hermitian(const OpSum& s);

/// Pairs (left*, right*): the map adjoint under the trace pairing.
OpSum adjoint_superop(const OpSum& s);

struct SelfAdjointReport {
  bool self_adjoint = false;
  double defect = 0.0;  // ||M - M*||_F / max(1, ||M||_F)
};

SelfAdjointReport is_self_adjoint(const SuperMat& s);
SelfAdjointReport is_self_adjoint(const OpSum& s);

struct DefinitenessReport {
  bool positive = false;
  double min_eig = 0.0;
  /// Eigenvector of the smallest eigenvalue as a matrix; <A(X), X> = min_eig.
  CMat witness;
};

/// Throws NotSelfAdjointError when the map is not self-adjoint.
DefinitenessReport is_positive_definite(const SuperMat& s);
DefinitenessReport is_positive_definite(const OpSum& s);

/// sum_i (x* left_i x)(y* right_i y) = <A(x y*), x y*>
Complex rank_one_pairing(const OpSum& s, const CVec& x, const CVec& y);

/// Smallest singular value of the stacking of vec(m_i) exceeds
/// independence * largest. An empty set counts as independent.
bool linearly_independent(const std::vector<CMat>& mats);

/// max over matrix units U of ||apply(a, U) - apply(b, U)||_F
double max_unit_deviation(const OpSum& a, const SuperMat& b);
double max_unit_deviation(const OpSum& a, const OpSum& b);

/// max(1, ||M||_F), the reference scale for map-level tolerances.
double map_scale(const SuperMat& s);

}  // namespace ipfactor

#endif
