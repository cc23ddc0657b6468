#ifndef IPFACTOR_CERTIFICATE_HPP
#define IPFACTOR_CERTIFICATE_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ipfactor/superop.hpp"

namespace ipfactor {

enum class Form { operator_sum, hermitian, all_positive, minus_one, semi_positive };

std::string_view to_string(Form form);
/// Throws InvalidArgument for unknown tags.
Form form_from_string(std::string_view tag);

/// Scalars chosen while positivizing, in the order the rewrites used them.
struct ShiftLedger {
  std::vector<double> alpha;  // x0* A_i x0 for the accepted probe
  std::vector<double> beta;   // beta, then beta_i for i >= 3
  std::vector<double> gamma;  // y0* B_i y0 for i >= 2
  std::vector<double> eta;
  std::vector<double> xi;
  double t0 = 0.0;
  double eps_backoff = 0.0;
  std::optional<double> alpha_shift;  // minus-one form
  std::optional<double> t0_second;    // second pencil step of the two-term form
  std::optional<double> eps_second;
  int probes_used = 0;
};

/// An OpSum whose terms carry +1 / -1 weights.
struct SignedSum {
  OpSum pairs;
  std::vector<int> signs;
};

/// Terms with the sign folded into the left factor.
OpSum fold_signs(const SignedSum& s);

struct Certificate {
  Form form = Form::operator_sum;
  OpSum pairs{1, {}};
  std::vector<int> signs;
  double residual = 0.0;
  std::vector<double> margins;
  ShiftLedger ledger;
};

/// For each term, whether its left and right factor are claimed positive
/// under `form`.
struct PositivityClaim {
  bool left = false;
  bool right = false;
};
std::vector<PositivityClaim> positivity_claims(Form form, std::size_t terms);

struct Check {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct VerifyReport {
  bool ok = false;
  double residual = 0.0;
  std::vector<double> margins;
  std::vector<Check> checks;

  [[nodiscard]] const Check* failed() const;
};

/// Recomputes signs, hermiticity, positivity margins and the matrix-unit
/// residual against `target` from the pairs and signs alone.
VerifyReport verify(const Certificate& cert, const SuperMat& target);

/// Builds a certificate with residual and margins measured against `target`.
/// Throws NumericalError if the result does not verify.
Certificate certify(Form form, SignedSum terms, ShiftLedger ledger, const SuperMat& target);

}  // namespace ipfactor

#endif
