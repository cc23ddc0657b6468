#ifndef IPFACTOR_POSITIVIZE_HPP
#define IPFACTOR_POSITIVIZE_HPP

// Turning a Hermitian-pair form of a positive-definite map into forms whose
// factors are positive definite:
//
//   one term    A X B -> +-(A, B)                       (all positive)
//   two terms   pencil rewrite                          (all positive)
//   any m >= 2  -A_1 X B_1 + sum_{i>=2} A_i X B_i       (minus-one form)
//   minus-one -> all positive, when the xi-condition holds
//
// "Positive" is numerical: min eigenvalue above pos_margin * max(1, ||H||_2).
// Shift constants for P + c Q are the exact pencil bound plus
// delta = shift_margin * max(1, (||P||_2 + |bound| ||Q||_2) / lambda_min(Q)).

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ipfactor/certificate.hpp"

namespace ipfactor {

/// Theorem-style single-term case: keep (A, B) or flip both signs.
Certificate positivize_single(const OpSum& s);

struct BPositive {
  OpSum pairs;
  ShiftLedger ledger;
};

/// Equivalent form with every right factor and the first left factor
/// positive, remaining left factors Hermitian. Requires m >= 2.
///
/// Probes with e_1 first; falls back to up to 32 random probes drawn from
/// `seed` when e_1 does not yield a positive combination.
BPositive make_b_positive(const OpSum& s, std::uint64_t seed = 0x1b0f5eedULL);

/// Two-term all-positive form.
Certificate positivize_two(const OpSum& s);

/// Minus-one form; the negative term is first.
Certificate minus_one_form(const OpSum& s);

struct ConditionReport {
  std::vector<double> xi_bar;  // supremal feasible xi_k
  double best_margin = 0.0;    // best min-eigenvalue slack seen over the deltas
  double best_delta = 0.0;
  std::string message;
};

/// Tries xi_k = (1 - delta) * xi_bar_k for delta in {1e-2, 1e-4, 1e-6}.
/// Throws InvalidArgument unless `c` is a valid minus_one certificate.
std::variant<Certificate, ConditionReport> try_all_positive(const Certificate& c);

/// The individual algebraic rewrites. Each one leaves the represented map
/// unchanged for any value of its scalar arguments; indices are 0-based.
namespace rewrite {

/// Moves term `lead` to the front, then
/// (A_1 / a_1) X (sum a_i B_i) + sum_{i>=2} (A_i - a_i / a_1 A_1) X B_i.
/// `alpha` is in the original term order.
OpSum probe(const OpSum& s, const std::vector<double>& alpha, std::size_t lead);

/// (A_1 - beta A_2) X B_1 + A_2 X (B_2 + beta B_1) + rest
OpSum beta_shift(const OpSum& s, double beta);

/// A_1 X (B_1 - t B_2) + (g_2 (A_2 + t A_1) + sum_{i>=3} g_i A_i) X B_2 / g_2
///   + sum_{i>=3} A_i X (B_i - g_i / g_2 B_2)
/// `gamma` holds g_2..g_m.
OpSum pencil_step(const OpSum& s, double t, const std::vector<double>& gamma);

/// (A_1 - sum_{i>=3} b_i A_i) X B_1 + A_2 X B_2 + sum_{i>=3} A_i X (B_i + b_i B_1)
/// `betas` holds b_3..b_m.
OpSum right_shifts(const OpSum& s, const std::vector<double>& betas);

OpSum swap_first_two(const OpSum& s);

/// -(alpha A_1 - A_2) X B_2 + A_1 X (B_1 + alpha B_2) + rest, negative term first.
SignedSum alpha_shift(const OpSum& s, double alpha);

/// With negative term N X B_N first:
/// -N X (B_N + sum eta_k B_k) + first positive term + sum_k (A_k + eta_k N) X B_k
/// for k >= 2 (0-based). `eta` holds one value per such k.
SignedSum eta_shifts(const SignedSum& s, const std::vector<double>& eta);

/// (-A_1 + sum_k xi_k A_k) X B_1 + sum_k A_k X (B_k - xi_k B_1), all signs +.
/// `xi` holds one value per term after the negative one.
SignedSum xi_step(const SignedSum& s, const std::vector<double>& xi);

}  // namespace rewrite

}  // namespace ipfactor

#endif
