#ifndef IPFACTOR_WITNESS_HPP
#define IPFACTOR_WITNESS_HPP

// The epsilon-map
//
//   [[x, y], [w, z]] -> [[x + (1 - e) z, e y], [e w, z + (1 - e) x]]
//
// is a positive-definite self-adjoint map on 2 x 2 matrices that has no
// decomposition with all factors positive when e < 1/2. This header provides
// it with its known decompositions, an auditor that replays the obstruction
// argument on a candidate decomposition, and numerical checks of the
// Fong-Sourour vanishing criteria.

#include <optional>
#include <string>
#include <vector>

#include "ipfactor/certificate.hpp"

namespace ipfactor {

struct EpsilonMap {
  double epsilon = 0.0;
  OpSum opsum;
  SuperMat supermat;

  /// e in (0, 1/2), where no all-positive decomposition exists.
  [[nodiscard]] bool in_obstruction_range() const { return epsilon < 0.5; }
};

/// The four matrix-unit terms (diag(1,e), E11), ((1-e) E12, E21),
/// ((1-e) E21, E12), (diag(e,1), E22). Throws InvalidArgument unless 0 < e < 1.
EpsilonMap counterexample_map(double epsilon);

/// The map evaluated entrywise from its closed form.
CMat epsilon_closed_form(double epsilon, const CMat& x);

/// e (|x|^2 + |y|^2 + |w|^2 + |z|^2) + (1 - e) |x + z|^2
double quadratic_form(const EpsilonMap& map, const CMat& x);

struct AuditReport {
  double epsilon = 0.0;
  int failed_step = 0;  // 0 when every step passes
  std::string reason;

  // Entry sums of the parametrization A_i = [[a, g], [conj g, b]],
  // B_i = [[a', g'], [conj g', b']].
  double sum_alpha_betap = 0.0;
  double sum_beta_alphap = 0.0;
  Complex sum_gamma_gammap{0.0, 0.0};

  // eps >= mean >= geometric >= products >= |sum| = 1 - eps
  double chain_mean = 0.0;
  double chain_geometric = 0.0;
  double chain_products = 0.0;
  double chain_abs_sum = 0.0;
  bool chain_holds = false;

  bool contradiction = false;
  /// Steps 1-3 passed for e < 1/2, or the inequality chain broke.
  bool numerical_inconsistency = false;

  [[nodiscard]] std::string chain_text() const;
};

/// Replays the obstruction argument on `candidate` for the epsilon-map and
/// reports the first failing step:
///   1. every factor positive
///   2. candidate reproduces the map on all matrix units
///   3. entry identities sum a b' = e, sum b a' = e, sum g conj(g') = 1 - e
///   4. the AM-GM chain forces e >= 1 - e; fails (contradiction) when e < 1/2
/// Throws DimensionError unless every factor is 2 x 2.
AuditReport obstruction_audit(const std::vector<Pair>& candidate, double epsilon);

/// "0.25 ≥ 0.75 is false → no all-positive form", or the no-conclusion
/// variant when e >= 1/2.
std::string obstruction_line(double epsilon);

struct FsReport {
  bool map_zero = false;
  bool coefficients_zero = false;
  double map_norm = 0.0;
  double coefficient_norm = 0.0;

  [[nodiscard]] bool equivalent() const { return map_zero == coefficients_zero; }
};

/// Phi(X) = sum_j A_j X B_j with independent B_j: Phi = 0 iff every A_j = 0.
/// Throws DependentSetError when the B_j are dependent.
FsReport fs_zero_test(const std::vector<CMat>& a, const std::vector<CMat>& b);

/// With B_1..B_s independent and B_j = sum_{k<s} c(k, j - s) B_k for j >= s
/// (0-based), Phi = 0 iff A_k + sum_j c(k, j - s) A_j = 0 for every k < s.
/// `coefficient_norm` reports the largest such combination. Throws
/// InvalidArgument when the dependency data are malformed.
FsReport fs_dependent_test(const std::vector<CMat>& a, const std::vector<CMat>& b, int s,
                           const CMat& c);

struct ReferenceForms {
  OpSum hermitian;
  std::optional<Certificate> minus_one;  // only for e = 1/4
};

/// The explicit decompositions of the epsilon-map, verbatim: the Hermitian
/// four-term form (any e) and the 1/32-scaled minus-one form for e = 1/4.
ReferenceForms reference_decompositions(double epsilon);

}  // namespace ipfactor

#endif
