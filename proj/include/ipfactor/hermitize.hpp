#ifndef IPFACTOR_HERMITIZE_HPP
#define IPFACTOR_HERMITIZE_HPP

// Rewriting a self-adjoint map sum_j E_j X F_j as sum_k A_k X B_k with every
// A_k and B_k Hermitian.
//
// Main route (same number of terms): find C with E_k* = sum_j conj(c_kj) E_j.
// Self-adjointness forces C conj(C) = I. A conjugate square root D
// (D^2 = C, D conj(D) = I) built as exp(Log(C)/2) with a purely imaginary
// logarithm mixes the terms into
//
//   A_k = sum_j conj(d_kj) E_j,   B_k = sum_i d_ik F_i.
//
// D is not unique; this library always takes exp(Log(C)/2) on the first
// admissible branch of log_unit_conj.
//
// Fallback (2m terms): since A(X) = (1/2) sum_j (E_j X F_j + E_j* X F_j*),
// split every term into its Hermitian and skew-Hermitian parts.

#include <string>

#include "ipfactor/superop.hpp"

namespace ipfactor {

struct ConjInvolution {
  CMat c;
  double residual = 0.0;        // worst relative least-squares residual
  double involution_defect = 0.0;  // ||C conj(C) - I||_F
};

struct ConjSqrt {
  CMat d;
  double square_defect = 0.0;     // ||D^2 - C||_F
  double involution_defect = 0.0;  // ||D conj(D) - I||_F
};

/// Least-squares coefficients of each E_k* in span{E_j}, cross-checked
/// against the right-hand relation F_k* = sum_i c_ik F_i.
///
/// Requires independent left and right sets and a self-adjoint map. Throws
/// HermitizeError when the residual or C conj(C) = I check fails.
ConjInvolution compute_c(const OpSum& s);

/// D = exp(Log(C) / 2). Throws HermitizeError (wrapping BranchError) on failure.
ConjSqrt conj_sqrt(const ConjInvolution& c);

/// Same-length Hermitian form. Throws HermitizeError when the C/D route fails;
/// callers then use hermitize_doubling. Pairs are rescaled so that
/// ||A_k||_F = ||B_k||_F.
OpSum hermitize(const OpSum& s);

/// The 2m-term Hermitian split followed by a Hermitian-preserving reduction.
OpSum hermitize_doubling(const OpSum& s);

struct HermitianForm {
  OpSum pairs;
  bool used_doubling = false;
  std::string fallback_reason;
};

/// reduce, then hermitize, falling back to hermitize_doubling on failure.
/// Throws NotSelfAdjointError for maps that are not self-adjoint.
HermitianForm hermitian_form(const OpSum& s);

}  // namespace ipfactor

#endif
