#include "ipfactor/positivize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "ipfactor/error.hpp"
#include "ipfactor/tolerances.hpp"

namespace ipfactor {

namespace {

constexpr int kMaxHalvings = 60;
constexpr int kRandomProbes = 32;

OpSum hermitian_pairs(const OpSum& s, const char* what) {
  const double tol = tolerances().herm;
  std::vector<Pair> pairs;
  pairs.reserve(s.size());
  for (const Pair& p : s.pairs()) {
    if (herm_defect(p.left) > tol * std::max(1.0, p.left.norm()) ||
        herm_defect(p.right) > tol * std::max(1.0, p.right.norm())) {
      throw NotHermitianError(std::string(what) + ": input pairs must be Hermitian");
    }
    pairs.push_back({hermitian_part(p.left), hermitian_part(p.right)});
  }
  return OpSum(s.dim(), std::move(pairs));
}

void require_positive_definite(const OpSum& s, const char* what) {
  DefinitenessReport pd = is_positive_definite(s);
  if (!pd.positive) {
    std::ostringstream msg;
    msg << what << ": map is not positive definite (min eigenvalue " << pd.min_eig << ")";
    throw NotPositiveError(msg.str());
  }
}

// Smallest admissible constant above `bound` for P + c Q (or c Q - P) plus a
// relative margin: the shifted matrix keeps a minimum eigenvalue of at least
// shift_margin * (||P||_2 + |bound| ||Q||_2).
double shift_above(double bound, const CMat& p, const PosMat& q) {
  const double scale = (spectral_norm(p) + std::abs(bound) * spectral_norm(q.mat())) / q.min_eig();
  return std::max(0.0, bound) + tolerances().shift_margin * std::max(1.0, scale);
}

PosMat positive_or_numerical(const CMat& m, const char* what) {
  try {
    return PosMat(HermMat::project(m));
  } catch (const NotPositiveError& e) {
    throw NumericalError(std::string(what) + ": " + e.what());
  }
}

std::vector<int> all_plus(std::size_t m) { return std::vector<int>(m, 1); }

// Halves eps from t0 / 2 until both matrices built at t = t0 - eps are positive.
template <class BuildB, class BuildA>
double back_off(double t0, BuildB build_b, BuildA build_a, const char* what) {
  double eps = t0 / 2.0;
  double b_slack = 0.0;
  double a_slack = 0.0;
  for (int i = 0; i <= kMaxHalvings; ++i) {
    const double t = t0 - eps;
    b_slack = positivity_slack(build_b(t));
    a_slack = positivity_slack(build_a(t));
    if (b_slack > 0.0 && a_slack > 0.0) return eps;
    eps /= 2.0;
  }
  std::ostringstream msg;
  msg << what << ": back-off exhausted after " << kMaxHalvings << " halvings (slack of B-side "
      << b_slack << ", A-side " << a_slack << ")";
  throw NumericalError(msg.str());
}

}  // namespace

namespace rewrite {

OpSum probe(const OpSum& s, const std::vector<double>& alpha, std::size_t lead) {
  const std::size_t m = s.size();
  if (alpha.size() != m || lead >= m) throw DimensionError("rewrite::probe: bad alpha/lead");
  std::vector<Pair> terms = s.pairs();
  std::vector<double> a = alpha;
  std::swap(terms[0], terms[lead]);
  std::swap(a[0], a[lead]);
  if (a[0] == 0.0) throw InvalidArgument("rewrite::probe: leading alpha is zero");

  std::vector<Pair> out;
  out.reserve(m);
  CMat combo = CMat::Zero(s.dim(), s.dim());
  for (std::size_t i = 0; i < m; ++i) combo += a[i] * terms[i].right;
  out.push_back({terms[0].left / a[0], combo});
  for (std::size_t i = 1; i < m; ++i) {
    out.push_back({terms[i].left - (a[i] / a[0]) * terms[0].left, terms[i].right});
  }
  return OpSum(s.dim(), std::move(out));
}

OpSum beta_shift(const OpSum& s, double beta) {
  if (s.size() < 2) throw DimensionError("rewrite::beta_shift: needs two terms");
  std::vector<Pair> t = s.pairs();
  const CMat a1 = t[0].left;
  const CMat b1 = t[0].right;
  t[0].left = a1 - beta * t[1].left;
  t[1].right = t[1].right + beta * b1;
  return OpSum(s.dim(), std::move(t));
}

OpSum pencil_step(const OpSum& s, double t, const std::vector<double>& gamma) {
  const std::size_t m = s.size();
  if (m < 2 || gamma.size() != m - 1) throw DimensionError("rewrite::pencil_step: bad gamma");
  const double g2 = gamma[0];
  if (g2 == 0.0) throw InvalidArgument("rewrite::pencil_step: gamma_2 is zero");
  const auto& in = s.pairs();
  std::vector<Pair> out;
  out.reserve(m);
  out.push_back({in[0].left, in[0].right - t * in[1].right});
  CMat combined = g2 * (in[1].left + t * in[0].left);
  for (std::size_t i = 2; i < m; ++i) combined += gamma[i - 1] * in[i].left;
  out.push_back({combined, in[1].right / g2});
  for (std::size_t i = 2; i < m; ++i) {
    out.push_back({in[i].left, in[i].right - (gamma[i - 1] / g2) * in[1].right});
  }
  return OpSum(s.dim(), std::move(out));
}

OpSum right_shifts(const OpSum& s, const std::vector<double>& betas) {
  const std::size_t m = s.size();
  if (m < 2 || betas.size() != m - 2) throw DimensionError("rewrite::right_shifts: bad betas");
  std::vector<Pair> t = s.pairs();
  const CMat b1 = t[0].right;
  for (std::size_t i = 2; i < m; ++i) {
    t[0].left -= betas[i - 2] * t[i].left;
    t[i].right += betas[i - 2] * b1;
  }
  return OpSum(s.dim(), std::move(t));
}

OpSum swap_first_two(const OpSum& s) {
  if (s.size() < 2) throw DimensionError("rewrite::swap_first_two: needs two terms");
  std::vector<Pair> t = s.pairs();
  std::swap(t[0], t[1]);
  return OpSum(s.dim(), std::move(t));
}

SignedSum alpha_shift(const OpSum& s, double alpha) {
  if (s.size() < 2) throw DimensionError("rewrite::alpha_shift: needs two terms");
  const auto& in = s.pairs();
  std::vector<Pair> out;
  out.reserve(s.size());
  out.push_back({alpha * in[0].left - in[1].left, in[1].right});
  out.push_back({in[0].left, in[0].right + alpha * in[1].right});
  for (std::size_t i = 2; i < s.size(); ++i) out.push_back(in[i]);
  std::vector<int> signs = all_plus(s.size());
  signs[0] = -1;
  return {OpSum(s.dim(), std::move(out)), std::move(signs)};
}

SignedSum eta_shifts(const SignedSum& s, const std::vector<double>& eta) {
  const std::size_t m = s.pairs.size();
  if (m < 2 || eta.size() != m - 2) throw DimensionError("rewrite::eta_shifts: bad eta");
  std::vector<Pair> t = s.pairs.pairs();
  const CMat negative_left = t[0].left;
  for (std::size_t k = 2; k < m; ++k) {
    const double e = eta[k - 2];
    // -N X (e B_k) from the negative term cancels the added (e N) X B_k.
    t[0].right += static_cast<double>(-s.signs[0]) * e * t[k].right;
    t[k].left += static_cast<double>(s.signs[k]) * e * negative_left;
  }
  return {OpSum(s.pairs.dim(), std::move(t)), s.signs};
}

SignedSum xi_step(const SignedSum& s, const std::vector<double>& xi) {
  const std::size_t m = s.pairs.size();
  if (m < 2 || xi.size() != m - 1) throw DimensionError("rewrite::xi_step: bad xi");
  if (s.signs[0] != -1) throw InvalidArgument("rewrite::xi_step: first term must be negative");
  for (std::size_t k = 1; k < m; ++k) {
    if (s.signs[k] != 1) throw InvalidArgument("rewrite::xi_step: only the first term may be negative");
  }
  const auto& in = s.pairs.pairs();
  std::vector<Pair> out;
  out.reserve(m);
  CMat left = -in[0].left;
  for (std::size_t k = 1; k < m; ++k) left += xi[k - 1] * in[k].left;
  out.push_back({left, in[0].right});
  for (std::size_t k = 1; k < m; ++k) out.push_back({in[k].left, in[k].right - xi[k - 1] * in[0].right});
  return {OpSum(s.pairs.dim(), std::move(out)), all_plus(m)};
}

}  // namespace rewrite

Certificate positivize_single(const OpSum& s) {
  if (s.size() != 1) throw InvalidArgument("positivize_single: expected exactly one term");
  OpSum h = hermitian_pairs(s, "positivize_single");
  require_positive_definite(h, "positivize_single");

  const Pair& p = h[0];
  EigenSystem es = herm_eig(HermMat::project(p.left));
  Eigen::Index largest = 0;
  es.values.cwiseAbs().maxCoeff(&largest);
  // x* A x at that eigenvector is the eigenvalue itself.
  const double probe = es.values(largest);
  Pair out = probe > 0.0 ? p : Pair{-p.left, -p.right};
  return certify(Form::all_positive, {OpSum(h.dim(), {out}), {1}}, {}, to_supermat(h));
}

BPositive make_b_positive(const OpSum& s, std::uint64_t seed) {
  if (s.size() < 2) throw InvalidArgument("make_b_positive: needs at least two terms");
  OpSum h = hermitian_pairs(s, "make_b_positive");
  require_positive_definite(h, "make_b_positive");
  const SuperMat target = to_supermat(h);
  const int n = h.dim();
  const std::size_t m = h.size();
  ShiftLedger ledger;

  // Probe: sum_i (x* A_i x) B_i is positive for every nonzero x.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> alpha(m);
  std::size_t lead = 0;
  bool accepted = false;
  double left_scale = 0.0;
  for (const Pair& p : h.pairs()) left_scale = std::max(left_scale, p.left.norm());
  for (int attempt = 0; attempt <= kRandomProbes && !accepted; ++attempt) {
    CVec x = CVec::Zero(n);
    if (attempt == 0) {
      x(0) = 1.0;
    } else {
      for (int i = 0; i < n; ++i) x(i) = Complex(normal(rng), normal(rng));
      x.normalize();
    }
    for (std::size_t i = 0; i < m; ++i) alpha[i] = x.dot(h[i].left * x).real();
    lead = 0;
    for (std::size_t i = 1; i < m; ++i)
      if (std::abs(alpha[i]) > std::abs(alpha[lead])) lead = i;
    if (std::abs(alpha[lead]) <= 1e-12 * std::max(1.0, left_scale)) continue;
    CMat combo = CMat::Zero(n, n);
    for (std::size_t i = 0; i < m; ++i) combo += alpha[i] * h[i].right;
    accepted = is_positive_matrix(combo);
    ledger.probes_used = attempt + 1;
  }
  if (!accepted) throw NotPositiveError("make_b_positive: positivity probe failed on every probe vector");
  ledger.alpha = alpha;
  OpSum cur = rewrite::probe(h, alpha, lead);

  // B_2 + beta B_1 positive.
  {
    PosMat b1 = positive_or_numerical(cur[0].right, "make_b_positive (B_1)");
    double mu = pencil_min(HermMat::project(cur[1].right), b1).t0;
    double beta = shift_above(-mu, cur[1].right, b1);
    ledger.beta.push_back(beta);
    cur = rewrite::beta_shift(cur, beta);
  }

  // Pencil B_1 - t B_2 and the gamma combination.
  {
    PosMat b2 = positive_or_numerical(cur[1].right, "make_b_positive (B_2 after beta shift)");
    PencilMin pm = pencil_min(HermMat::project(cur[0].right), b2);
    ledger.t0 = pm.t0;
    std::vector<double> gamma(m - 1);
    for (std::size_t i = 1; i < m; ++i) gamma[i - 1] = pm.y0.dot(cur[i].right * pm.y0).real();
    if (!(gamma[0] > 0.0)) throw NumericalError("make_b_positive: gamma_2 is not positive");
    ledger.gamma = gamma;

    const OpSum& c = cur;
    auto build_b = [&](double t) -> CMat { return c[0].right - t * c[1].right; };
    auto build_a = [&](double t) -> CMat {
      CMat a = gamma[0] * (c[1].left + t * c[0].left);
      for (std::size_t i = 2; i < m; ++i) a += gamma[i - 1] * c[i].left;
      return a;
    };
    ledger.eps_backoff = back_off(pm.t0, build_b, build_a, "make_b_positive");
    cur = rewrite::pencil_step(cur, pm.t0 - ledger.eps_backoff, gamma);
  }

  // B_i + beta_i B_1 positive for the remaining terms.
  if (m > 2) {
    PosMat b1 = positive_or_numerical(cur[0].right, "make_b_positive (B_1 after pencil step)");
    std::vector<double> betas;
    for (std::size_t i = 2; i < m; ++i) {
      double mu = pencil_min(HermMat::project(cur[i].right), b1).t0;
      betas.push_back(shift_above(-mu, cur[i].right, b1));
    }
    ledger.beta.insert(ledger.beta.end(), betas.begin(), betas.end());
    cur = rewrite::right_shifts(cur, betas);
  }
  cur = rewrite::swap_first_two(cur);

  Certificate cert = certify(Form::semi_positive, {cur, all_plus(m)}, ledger, target);
  return {cert.pairs, cert.ledger};
}

Certificate positivize_two(const OpSum& s) {
  if (s.size() != 2) throw InvalidArgument("positivize_two: expected exactly two terms");
  OpSum h = hermitian_pairs(s, "positivize_two");
  BPositive bp = make_b_positive(h);
  const OpSum& cur = bp.pairs;

  PosMat b2 = positive_or_numerical(cur[1].right, "positivize_two (B_2)");
  PencilMin pm = pencil_min(HermMat::project(cur[0].right), b2);
  auto build_b = [&](double t) -> CMat { return cur[0].right - t * cur[1].right; };
  auto build_a = [&](double t) -> CMat { return cur[1].left + t * cur[0].left; };
  double eps = back_off(pm.t0, build_b, build_a, "positivize_two");

  ShiftLedger ledger = bp.ledger;
  ledger.t0_second = pm.t0;
  ledger.eps_second = eps;
  OpSum out = rewrite::pencil_step(cur, pm.t0 - eps, {1.0});
  return certify(Form::all_positive, {out, all_plus(2)}, ledger, to_supermat(h));
}

Certificate minus_one_form(const OpSum& s) {
  if (s.size() < 2) throw InvalidArgument("minus_one_form: needs at least two terms");
  OpSum h = hermitian_pairs(s, "minus_one_form");
  BPositive bp = make_b_positive(h);
  const std::size_t m = h.size();
  ShiftLedger ledger = bp.ledger;

  PosMat a1 = positive_or_numerical(bp.pairs[0].left, "minus_one_form (A_1)");
  double alpha = shift_above(pencil_max(HermMat::project(bp.pairs[1].left), a1), bp.pairs[1].left, a1);
  ledger.alpha_shift = alpha;
  SignedSum cur = rewrite::alpha_shift(bp.pairs, alpha);

  if (m > 2) {
    PosMat negative = positive_or_numerical(cur.pairs[0].left, "minus_one_form (alpha A_1 - A_2)");
    for (std::size_t k = 2; k < m; ++k) {
      double mu = pencil_min(HermMat::project(cur.pairs[k].left), negative).t0;
      ledger.eta.push_back(shift_above(-mu, cur.pairs[k].left, negative));
    }
    cur = rewrite::eta_shifts(cur, ledger.eta);
  }
  return certify(Form::minus_one, std::move(cur), ledger, to_supermat(h));
}

std::variant<Certificate, ConditionReport> try_all_positive(const Certificate& c) {
  if (c.form != Form::minus_one) throw InvalidArgument("try_all_positive: certificate is not minus_one");
  const std::size_t m = c.pairs.size();
  if (m < 2) throw InvalidArgument("try_all_positive: needs at least two terms");
  const SignedSum input{c.pairs, c.signs};
  const SuperMat target = to_supermat(fold_signs(input));
  {
    VerifyReport self = verify(c, target);
    if (!self.ok) {
      throw InvalidArgument("try_all_positive: not a valid minus_one certificate (" + self.failed()->name + ")");
    }
  }

  const CMat& a1 = c.pairs[0].left;
  const CMat& b1 = c.pairs[0].right;
  const PosMat b1_pos(HermMat::project(b1));
  ConditionReport report;
  report.best_margin = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < m; ++k) {
    report.xi_bar.push_back(pencil_min(HermMat::project(c.pairs[k].right), b1_pos).t0);
  }

  for (double delta : {1e-2, 1e-4, 1e-6}) {
    std::vector<double> xi;
    for (double bar : report.xi_bar) xi.push_back((1.0 - delta) * bar);
    CMat combo = -a1;
    for (std::size_t k = 1; k < m; ++k) combo += xi[k - 1] * c.pairs[k].left;
    double margin = positivity_slack(combo);
    for (std::size_t k = 1; k < m; ++k) {
      margin = std::min(margin, positivity_slack(c.pairs[k].right - xi[k - 1] * b1));
    }
    if (margin > report.best_margin) {
      report.best_margin = margin;
      report.best_delta = delta;
    }
    if (margin <= 0.0) continue;
    ShiftLedger ledger = c.ledger;
    ledger.xi = xi;
    try {
      return certify(Form::all_positive, rewrite::xi_step(input, xi), ledger, target);
    } catch (const NumericalError&) {
    }
  }

  std::ostringstream msg;
  msg << "xi-condition not met: best min-eigenvalue slack " << report.best_margin << " at delta "
      << report.best_delta << "; the condition is sufficient, not necessary";
  report.message = msg.str();
  return report;
}

}  // namespace ipfactor
