#include "ipfactor/cli/commands.hpp"

#include <cmath>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>
#include <variant>

#include "ipfactor/cli/json_io.hpp"
#include "ipfactor/hermitize.hpp"
#include "ipfactor/positivize.hpp"
#include "ipfactor/witness.hpp"

namespace ipfactor::cli {

namespace {

std::string format_complex(Complex z) {
  std::ostringstream out;
  out << std::setprecision(8);
  const double scale = std::max(1.0, std::abs(z));
  const bool has_re = std::abs(z.real()) > 1e-14 * scale;
  const bool has_im = std::abs(z.imag()) > 1e-14 * scale;
  if (!has_im) {
    out << (has_re ? z.real() : 0.0);
  } else if (!has_re) {
    out << z.imag() << "i";
  } else {
    out << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  }
  return out.str();
}

std::string format_matrix(const CMat& m) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += i ? ", [" : "[";
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      if (k) out += ", ";
      out += format_complex(m(i, k));
    }
    out += "]";
  }
  return out + "]";
}

std::string format_signs(const std::vector<int>& signs) {
  std::string out;
  for (int s : signs) {
    if (!out.empty()) out += ' ';
    out += s < 0 ? '-' : '+';
  }
  return out;
}

void print_pairs(std::ostream& out, const OpSum& s, const std::vector<int>& signs = {}) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << "  term " << i + 1;
    if (!signs.empty()) out << " (" << (signs[i] < 0 ? '-' : '+') << ")";
    out << ": A = " << format_matrix(s[i].left) << "  B = " << format_matrix(s[i].right) << "\n";
  }
}

void print_checks(std::ostream& out, const VerifyReport& r) {
  for (const Check& c : r.checks) {
    out << "check " << c.name << ": " << (c.ok ? "ok" : "FAILED") << " (" << c.detail << ")\n";
  }
}

enum class Target { opsum, hermitian, positive, minus_one, automatic };

std::optional<Target> parse_target(const std::string& form) {
  if (form == "opsum") return Target::opsum;
  if (form == "hermitian") return Target::hermitian;
  if (form == "positive") return Target::positive;
  if (form == "minus-one") return Target::minus_one;
  if (form == "auto") return Target::automatic;
  return std::nullopt;
}

using Outcome = std::variant<Certificate, ConditionReport>;

// -A X B + 2A X B, for maps that reduce to a single term.
Certificate duplicated_minus_one(const Certificate& single, const SuperMat& target) {
  const Pair& p = single.pairs[0];
  OpSum terms(single.pairs.dim(), {p, {2.0 * p.left, p.right}});
  return certify(Form::minus_one, {std::move(terms), {-1, 1}}, single.ledger, target);
}

Outcome strongest_positive(const OpSum& hermitian_pairs) {
  if (hermitian_pairs.size() == 1) return positivize_single(hermitian_pairs);
  if (hermitian_pairs.size() == 2) {
    try {
      return positivize_two(hermitian_pairs);
    } catch (const NumericalError&) {
    }
  }
  Certificate minus = minus_one_form(hermitian_pairs);
  Outcome attempt = try_all_positive(minus);
  if (std::holds_alternative<ConditionReport>(attempt)) {
    std::get<ConditionReport>(attempt).message += "; minus_one form achieved";
  }
  return attempt;
}

Outcome run_pipeline(Target target, const ProblemSpec& spec) {
  OpSum source = spec.pairs ? reduce(*spec.pairs) : from_supermat(spec.target);
  if (target == Target::opsum) {
    return certify(Form::operator_sum, {source, std::vector<int>(source.size(), 1)}, {}, spec.target);
  }
  HermitianForm h = hermitian_form(source);
  const OpSum& pairs = h.pairs;
  switch (target) {
    case Target::hermitian:
      return certify(Form::hermitian, {pairs, std::vector<int>(pairs.size(), 1)}, {}, spec.target);
    case Target::minus_one:
      if (pairs.size() == 1) return duplicated_minus_one(positivize_single(pairs), spec.target);
      return minus_one_form(pairs);
    case Target::positive:
      return strongest_positive(pairs);
    case Target::automatic: {
      Outcome best = strongest_positive(pairs);
      if (std::holds_alternative<Certificate>(best)) return best;
      return minus_one_form(pairs);
    }
    case Target::opsum:
      break;
  }
  return certify(Form::hermitian, {pairs, std::vector<int>(pairs.size(), 1)}, {}, spec.target);
}

// Anti-Hermitian part of the supermatrix: its top eigenvector gives an X
// with <Phi(X), X> off the real axis.
CMat non_real_witness(const SuperMat& s) {
  const CMat& m = s.mat();
  CMat k = (m - m.adjoint()) / Complex(0.0, 2.0);
  EigenSystem es = herm_eig(HermMat::project(k));
  Eigen::Index best = 0;
  es.values.cwiseAbs().maxCoeff(&best);
  return unvec(es.vectors.col(best), s.dim());
}

}  // namespace

int cmd_validate(const std::string& spec_path, std::ostream& out) {
  ProblemSpec spec;
  try {
    spec = load_problem(spec_path);
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return kParse;
  }
  out << std::setprecision(12);
  SelfAdjointReport sa = is_self_adjoint(spec.target);
  out << "self-adjoint defect: " << sa.defect << "\n";
  if (!sa.self_adjoint) {
    CMat x = non_real_witness(spec.target);
    out << "min eigenvalue: n/a\n"
        << "inner product: no (not self-adjoint)\n"
        << "violating X: " << format_matrix(x) << "\n"
        << "<Phi(X), X> = " << format_complex(hs_inner(ipfactor::apply(spec.target, x), x)) << "\n";
    return kFailed;
  }
  DefinitenessReport pd = is_positive_definite(spec.target);
  out << "min eigenvalue: " << pd.min_eig << "\n";
  if (pd.positive) {
    out << "inner product: yes\n";
    return kOk;
  }
  out << "inner product: no\n"
      << "violating X: " << format_matrix(pd.witness) << "\n"
      << "<Phi(X), X> = " << format_complex(hs_inner(ipfactor::apply(spec.target, pd.witness), pd.witness))
      << "\n";
  return kFailed;
}

int cmd_decompose(const std::string& spec_path, const std::string& form, const std::string& out_path,
                  std::ostream& out) {
  std::optional<Target> target = parse_target(form);
  if (!target) {
    out << "error: unknown form '" << form << "' (opsum, hermitian, positive, minus-one, auto)\n";
    return kParse;
  }
  ProblemSpec spec;
  try {
    spec = load_problem(spec_path);
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return kParse;
  }

  if (!is_self_adjoint(spec.target).self_adjoint) {
    out << "invalid spec: map is not self-adjoint\n";
    return kFailed;
  }
  DefinitenessReport pd = is_positive_definite(spec.target);
  if (!pd.positive) {
    out << "invalid spec: map is not positive definite (min eigenvalue " << pd.min_eig << ")\n";
    return kFailed;
  }

  Outcome outcome;
  try {
    outcome = run_pipeline(*target, spec);
  } catch (const Error& e) {
    out << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }

  if (const auto* report = std::get_if<ConditionReport>(&outcome)) {
    out << "requested form not achieved: " << report->message << "\n"
        << "xi_bar:";
    for (double x : report->xi_bar) out << " " << x;
    out << "\nbest margin: " << report->best_margin << " at delta " << report->best_delta << "\n";
    return kNotAchieved;
  }

  Certificate cert = std::get<Certificate>(std::move(outcome));
  VerifyReport check = verify(cert, spec.target);
  if (!check.ok) {
    out << "numerical failure: certificate fails check '" << check.failed()->name << "' against the spec\n";
    return kNumerical;
  }
  cert.residual = check.residual;
  cert.margins = check.margins;

  const std::string text = canonical_dump(certificate_json(cert, problem_hash(spec.doc)), true);
  out << "form: " << to_string(cert.form) << "\n"
      << "terms: " << cert.pairs.size() << "\n"
      << "signs: " << format_signs(cert.signs) << "\n"
      << "residual: " << cert.residual << "\n";
  if (out_path.empty()) {
    out << text;
    return kOk;
  }
  try {
    write_text_file(out_path, text);
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return kParse;
  }
  out << "wrote " << out_path << "\n";
  return kOk;
}

int cmd_verify(const std::string& cert_path, const std::string& spec_path, std::ostream& out) {
  CertificateDoc doc;
  ProblemSpec spec;
  try {
    doc = parse_certificate(read_json_file(cert_path));
    spec = load_problem(spec_path);
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return kParse;
  }
  if (problem_hash(spec.doc) != doc.problem_hash) {
    out << "error: problem hash mismatch (certificate was issued for a different spec)\n";
    return kParse;
  }

  VerifyReport report = verify(doc.cert, spec.target);
  print_checks(out, report);
  if (report.ok) {
    out << "certificate valid (" << to_string(doc.cert.form) << ", " << doc.cert.pairs.size() << " terms)\n";
    return kOk;
  }
  out << "failed checks:";
  for (const Check& c : report.checks)
    if (!c.ok) out << " " << c.name;
  out << "\n";
  return kFailed;
}

int cmd_demo(double epsilon, std::ostream& out) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    out << "error: epsilon must lie in (0, 1), got " << epsilon << "\n";
    return kParse;
  }
  const EpsilonMap map = counterexample_map(epsilon);
  bool all_ok = true;
  auto report = [&](const std::string& name, bool ok, double value) {
    all_ok = all_ok && ok;
    out << "check " << name << ": " << (ok ? "ok" : "FAILED") << " (" << value << ")\n";
  };

  out << "epsilon-map with e = " << epsilon << "\n"
      << "closed form: [[x, y], [w, z]] -> [[x + (1 - e) z, e y], [e w, z + (1 - e) x]]\n";

  double closed = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CMat u = matrix_unit(2, i, j);
      closed = std::max(closed, (ipfactor::apply(map.supermat, u) - epsilon_closed_form(epsilon, u)).norm());
    }
  report("closed form vs matrix-unit terms", closed <= 1e-15, closed);

  std::mt19937_64 rng(2024);
  std::normal_distribution<double> normal;
  double quad = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    CMat x(2, 2);
    for (int i = 0; i < 4; ++i) x(i % 2, i / 2) = Complex(normal(rng), normal(rng));
    Complex direct = hs_inner(ipfactor::apply(map.opsum, x), x);
    quad = std::max(quad, std::abs(direct - quadratic_form(map, x)) / std::max(1.0, x.squaredNorm()));
  }
  report("quadratic form identity (100 random X)", quad <= 1e-12, quad);

  const double lowest = min_eig(map.supermat.mat());
  report("smallest eigenvalue equals e", std::abs(lowest - epsilon) <= 1e-12, lowest);

  out << "matrix-unit form:\n";
  print_pairs(out, map.opsum);
  ReferenceForms forms = reference_decompositions(epsilon);
  out << "Hermitian form:\n";
  print_pairs(out, forms.hermitian);
  const double herm_dev = max_unit_deviation(forms.hermitian, map.supermat);
  report("Hermitian form reproduces the map", herm_dev <= 1e-12, herm_dev);

  const int rank = realignment_rank(map.supermat);
  out << "minimal number of terms: " << rank << "\n";
  all_ok = all_ok && rank == 4;

  if (forms.minus_one) {
    out << "minus-one form (1/32-scaled):\n";
    print_pairs(out, forms.minus_one->pairs, forms.minus_one->signs);
    VerifyReport v = verify(*forms.minus_one, map.supermat);
    print_checks(out, v);
    all_ok = all_ok && v.ok;
  }

  if (map.in_obstruction_range()) {
    out << "obstruction chain: e = sum a b' >= sum (a b' + b a')/2 >= sum sqrt(a b' b a')"
           " >= sum |g||g'| >= |sum g conj(g')| = 1 - e\n";
  }
  out << "obstruction: " << obstruction_line(epsilon) << "\n";
  return all_ok ? kOk : kFailed;
}

int cmd_random(int n, int m, std::uint64_t seed, const std::string& out_path, std::ostream& out) {
  if (n < 1 || n > 16 || m < 1 || m > n * n) {
    out << "error: need 1 <= n <= 16 and 1 <= m <= n^2\n";
    return kParse;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto gram = [&] {
    CMat g(n, n);
    for (Eigen::Index k = 0; k < g.cols(); ++k)
      for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, k) = Complex(normal(rng), normal(rng));
    g /= std::sqrt(2.0 * n);
    return hermitian_part(g.adjoint() * g + 0.1 * CMat::Identity(n, n));
  };
  std::vector<Pair> pairs;
  for (int i = 0; i < m; ++i) {
    CMat a = gram();
    CMat b = gram();
    pairs.push_back({std::move(a), std::move(b)});
  }
  const std::string text =
      canonical_dump(problem_json(OpSum(n, std::move(pairs)), static_cast<std::int64_t>(seed)), true);
  if (out_path.empty()) {
    out << text;
    return kOk;
  }
  try {
    write_text_file(out_path, text);
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return kParse;
  }
  out << "wrote " << out_path << "\n";
  return kOk;
}

}  // namespace ipfactor::cli
