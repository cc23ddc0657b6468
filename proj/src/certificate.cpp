#include "ipfactor/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ipfactor/error.hpp"
#include "ipfactor/tolerances.hpp"

namespace ipfactor {

std::string_view to_string(Form form) {
  switch (form) {
    case Form::operator_sum: return "operator_sum";
    case Form::hermitian: return "hermitian";
    case Form::all_positive: return "all_positive";
    case Form::minus_one: return "minus_one";
    case Form::semi_positive: return "semi_positive";
  }
  return "operator_sum";
}

Form form_from_string(std::string_view tag) {
  for (Form f : {Form::operator_sum, Form::hermitian, Form::all_positive, Form::minus_one,
                 Form::semi_positive}) {
    if (to_string(f) == tag) return f;
  }
  throw InvalidArgument("unknown form tag '" + std::string(tag) + "'");
}

OpSum fold_signs(const SignedSum& s) {
  if (s.signs.size() != s.pairs.size()) throw DimensionError("fold_signs: sign count mismatch");
  std::vector<Pair> pairs = s.pairs.pairs();
  for (std::size_t i = 0; i < pairs.size(); ++i) pairs[i].left *= static_cast<double>(s.signs[i]);
  return OpSum(s.pairs.dim(), std::move(pairs));
}

std::vector<PositivityClaim> positivity_claims(Form form, std::size_t terms) {
  std::vector<PositivityClaim> claims(terms);
  switch (form) {
    case Form::all_positive:
    case Form::minus_one:
      for (auto& c : claims) c = {true, true};
      break;
    case Form::semi_positive:
      for (auto& c : claims) c.right = true;
      if (!claims.empty()) claims[0].left = true;
      break;
    case Form::operator_sum:
    case Form::hermitian:
      break;
  }
  return claims;
}

const Check* VerifyReport::failed() const {
  for (const Check& c : checks)
    if (!c.ok) return &c;
  return nullptr;
}

namespace {

Check check_signs(const Certificate& cert) {
  Check c{"signs", true, {}};
  if (cert.signs.size() != cert.pairs.size()) {
    return {"signs", false, "sign count does not match term count"};
  }
  int negatives = 0;
  for (std::size_t i = 0; i < cert.signs.size(); ++i) {
    int s = cert.signs[i];
    if (s != 1 && s != -1) return {"signs", false, "sign is not +1 or -1"};
    if (s == -1) {
      ++negatives;
      if (i != 0) return {"signs", false, "negative sign away from the first term"};
    }
  }
  if (cert.form == Form::minus_one && negatives != 1) {
    return {"signs", false, "minus_one form needs exactly one negative sign"};
  }
  if (cert.form != Form::minus_one && negatives != 0) {
    return {"signs", false, "negative sign outside the minus_one form"};
  }
  c.detail = std::to_string(negatives) + " negative";
  return c;
}

}  // namespace

VerifyReport verify(const Certificate& cert, const SuperMat& target) {
  VerifyReport report;
  const Tolerances& tol = tolerances();

  if (cert.pairs.dim() != target.dim()) {
    report.checks.push_back({"dimension", false, "certificate and problem dimensions differ"});
    return report;
  }

  report.checks.push_back(check_signs(cert));

  if (cert.form != Form::operator_sum) {
    double worst = 0.0;
    bool ok = true;
    for (const Pair& p : cert.pairs.pairs()) {
      for (const CMat* m : {&p.left, &p.right}) {
        double rel = herm_defect(*m) / std::max(1.0, m->norm());
        worst = std::max(worst, rel);
        ok = ok && rel <= tol.herm;
      }
    }
    std::ostringstream detail;
    detail << "max relative defect " << worst;
    report.checks.push_back({"hermitian", ok, detail.str()});
  }

  auto claims = positivity_claims(cert.form, cert.pairs.size());
  bool positive_ok = true;
  double smallest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cert.pairs.size(); ++i) {
    const Pair& p = cert.pairs[i];
    if (claims[i].left) {
      report.margins.push_back(min_eig(p.left));
      positive_ok = positive_ok && is_positive_matrix(p.left);
    }
    if (claims[i].right) {
      report.margins.push_back(min_eig(p.right));
      positive_ok = positive_ok && is_positive_matrix(p.right);
    }
  }
  for (double m : report.margins) smallest = std::min(smallest, m);
  if (!report.margins.empty()) {
    std::ostringstream detail;
    detail << report.margins.size() << " matrices, smallest eigenvalue " << smallest;
    report.checks.push_back({"positivity", positive_ok, detail.str()});
  }

  bool signs_usable = cert.signs.size() == cert.pairs.size();
  if (signs_usable) {
    report.residual = max_unit_deviation(fold_signs({cert.pairs, cert.signs}), target);
    double bound = tol.residual * map_scale(target);
    std::ostringstream detail;
    detail << "residual " << report.residual << " (bound " << bound << ")";
    report.checks.push_back({"residual", report.residual <= bound, detail.str()});
  }

  report.ok = std::all_of(report.checks.begin(), report.checks.end(), [](const Check& c) { return c.ok; });
  return report;
}

Certificate certify(Form form, SignedSum terms, ShiftLedger ledger, const SuperMat& target) {
  Certificate cert;
  cert.form = form;
  cert.pairs = std::move(terms.pairs);
  cert.signs = std::move(terms.signs);
  cert.ledger = std::move(ledger);
  VerifyReport report = verify(cert, target);
  cert.residual = report.residual;
  cert.margins = report.margins;
  if (!report.ok) {
    const Check* bad = report.failed();
    throw NumericalError("certificate for form " + std::string(to_string(form)) + " fails check '" +
                         bad->name + "': " + bad->detail);
  }
  return cert;
}

}  // namespace ipfactor
