#include "ipfactor/witness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ipfactor/error.hpp"
#include "ipfactor/tolerances.hpp"

namespace ipfactor {

namespace {

CMat mat2(Complex a, Complex b, Complex c, Complex d) {
  CMat m(2, 2);
  m << a, b, c, d;
  return m;
}

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    std::ostringstream msg;
    msg << "epsilon must lie in (0, 1), got " << epsilon;
    throw InvalidArgument(msg.str());
  }
}

double operator_scale(const std::vector<CMat>& a, const std::vector<CMat>& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j].norm() * b[j].norm();
  return std::max(1.0, s);
}

CMat phi_supermat(const std::vector<CMat>& a, const std::vector<CMat>& b) {
  const int n = static_cast<int>(a.front().rows());
  std::vector<Pair> pairs;
  for (std::size_t j = 0; j < a.size(); ++j) pairs.push_back({a[j], b[j]});
  return to_supermat(OpSum(n, std::move(pairs))).mat();
}

void require_lists(const std::vector<CMat>& a, const std::vector<CMat>& b) {
  if (a.empty() || a.size() != b.size()) throw InvalidArgument("A and B lists must be non-empty and equal length");
}

}  // namespace

EpsilonMap counterexample_map(double epsilon) {
  require_epsilon(epsilon);
  const double e = epsilon;
  std::vector<Pair> pairs{
      {mat2(1, 0, 0, e), matrix_unit(2, 0, 0)},
      {(1 - e) * matrix_unit(2, 0, 1), matrix_unit(2, 1, 0)},
      {(1 - e) * matrix_unit(2, 1, 0), matrix_unit(2, 0, 1)},
      {mat2(e, 0, 0, 1), matrix_unit(2, 1, 1)},
  };
  OpSum opsum(2, std::move(pairs));
  SuperMat supermat = to_supermat(opsum);
  return {epsilon, std::move(opsum), std::move(supermat)};
}

CMat epsilon_closed_form(double epsilon, const CMat& x) {
  if (x.rows() != 2 || x.cols() != 2) throw DimensionError("epsilon_closed_form: expected 2x2 input");
  const double e = epsilon;
  return mat2(x(0, 0) + (1 - e) * x(1, 1), e * x(0, 1), e * x(1, 0), x(1, 1) + (1 - e) * x(0, 0));
}

double quadratic_form(const EpsilonMap& map, const CMat& x) {
  if (x.rows() != 2 || x.cols() != 2) throw DimensionError("quadratic_form: expected 2x2 input");
  const double e = map.epsilon;
  return e * x.squaredNorm() + (1 - e) * std::norm(x(0, 0) + x(1, 1));
}

std::string AuditReport::chain_text() const {
  std::ostringstream out;
  out << "mean " << chain_mean << " >= geometric " << chain_geometric << " >= sum|g||g'| " << chain_products
      << " >= |sum g conj(g')| " << chain_abs_sum << " (a decomposition needs mean = " << epsilon
      << " and last = " << 1.0 - epsilon << ")";
  return out.str();
}

AuditReport obstruction_audit(const std::vector<Pair>& candidate, double epsilon) {
  require_epsilon(epsilon);
  for (const Pair& p : candidate) {
    if (p.left.rows() != 2 || p.left.cols() != 2 || p.right.rows() != 2 || p.right.cols() != 2) {
      throw DimensionError("obstruction_audit: candidate factors must be 2x2");
    }
  }
  AuditReport r;
  r.epsilon = epsilon;
  const double tol = 1e-8;

  // Entry bookkeeping and the AM-GM chain, reported whatever step fails.
  for (const Pair& p : candidate) {
    const double a = p.left(0, 0).real(), b = p.left(1, 1).real();
    const double ap = p.right(0, 0).real(), bp = p.right(1, 1).real();
    const Complex g = p.left(0, 1), gp = p.right(0, 1);
    r.sum_alpha_betap += a * bp;
    r.sum_beta_alphap += b * ap;
    r.sum_gamma_gammap += g * std::conj(gp);
    r.chain_mean += (a * bp + b * ap) / 2.0;
    r.chain_geometric += std::sqrt(std::max(0.0, a * bp * b * ap));
    r.chain_products += std::abs(g) * std::abs(gp);
  }
  r.chain_abs_sum = std::abs(r.sum_gamma_gammap);
  r.chain_holds = r.chain_mean >= r.chain_geometric - tol && r.chain_geometric >= r.chain_products - tol &&
                  r.chain_products >= r.chain_abs_sum - tol;

  for (std::size_t i = 0; i < candidate.size(); ++i) {
    if (!is_positive_matrix(candidate[i].left) || !is_positive_matrix(candidate[i].right)) {
      r.failed_step = 1;
      r.reason = "term " + std::to_string(i + 1) + " has a factor that is not positive definite";
      return r;
    }
  }

  const EpsilonMap map = counterexample_map(epsilon);
  const double deviation = max_unit_deviation(OpSum(2, candidate), map.supermat);
  if (deviation > tol * map_scale(map.supermat)) {
    std::ostringstream msg;
    msg << "candidate does not reproduce the map (max matrix-unit deviation " << deviation << ")";
    r.failed_step = 2;
    r.reason = msg.str();
    return r;
  }

  if (std::abs(r.sum_alpha_betap - epsilon) > tol || std::abs(r.sum_beta_alphap - epsilon) > tol ||
      std::abs(r.sum_gamma_gammap - Complex(1.0 - epsilon, 0.0)) > tol) {
    r.failed_step = 3;
    r.reason = "entry identities do not hold";
    return r;
  }

  if (!r.chain_holds) {
    r.failed_step = 4;
    r.numerical_inconsistency = true;
    r.reason = "inequality chain violated numerically: " + r.chain_text();
    return r;
  }
  if (epsilon < 1.0 - epsilon) {
    r.failed_step = 4;
    r.contradiction = true;
    // Steps 1-3 cannot all pass for e < 1/2 in exact arithmetic.
    r.numerical_inconsistency = true;
    r.reason = obstruction_line(epsilon);
    return r;
  }
  return r;
}

std::string obstruction_line(double epsilon) {
  std::ostringstream out;
  out << epsilon << " ≥ " << 1.0 - epsilon;
  if (epsilon < 1.0 - epsilon) {
    out << " is false → no all-positive form";
  } else {
    out << " holds → inequality not violated (no conclusion)";
  }
  return out.str();
}

FsReport fs_zero_test(const std::vector<CMat>& a, const std::vector<CMat>& b) {
  require_lists(a, b);
  if (!linearly_independent(b)) {
    throw DependentSetError("fs_zero_test: B list is linearly dependent; use fs_dependent_test");
  }
  FsReport r;
  const double scale = operator_scale(a, b);
  r.map_norm = phi_supermat(a, b).norm();
  for (const CMat& m : a) r.coefficient_norm = std::max(r.coefficient_norm, m.norm());
  r.map_zero = r.map_norm <= 1e-9 * scale;
  r.coefficients_zero = r.coefficient_norm <= 1e-9 * scale;
  return r;
}

FsReport fs_dependent_test(const std::vector<CMat>& a, const std::vector<CMat>& b, int s, const CMat& c) {
  require_lists(a, b);
  const int m = static_cast<int>(a.size());
  if (s < 1 || s >= m) throw InvalidArgument("fs_dependent_test: need 1 <= s < m");
  if (c.rows() != s || c.cols() != m - s) throw InvalidArgument("fs_dependent_test: c must be s x (m - s)");
  std::vector<CMat> basis(b.begin(), b.begin() + s);
  if (!linearly_independent(basis)) throw InvalidArgument("fs_dependent_test: B_1..B_s are dependent");
  for (int j = s; j < m; ++j) {
    CMat combo = CMat::Zero(b[j].rows(), b[j].cols());
    for (int k = 0; k < s; ++k) combo += c(k, j - s) * b[k];
    if ((combo - b[j]).norm() > 1e-9 * std::max(1.0, b[j].norm())) {
      throw InvalidArgument("fs_dependent_test: B_" + std::to_string(j + 1) +
                            " does not match its stated combination");
    }
  }

  FsReport r;
  const double scale = operator_scale(a, b);
  r.map_norm = phi_supermat(a, b).norm();
  for (int k = 0; k < s; ++k) {
    CMat combo = a[k];
    for (int j = s; j < m; ++j) combo += c(k, j - s) * a[j];
    r.coefficient_norm = std::max(r.coefficient_norm, combo.norm());
  }
  r.map_zero = r.map_norm <= 1e-9 * scale;
  r.coefficients_zero = r.coefficient_norm <= 1e-9 * scale;
  return r;
}

ReferenceForms reference_decompositions(double epsilon) {
  const EpsilonMap map = counterexample_map(epsilon);
  const double e = epsilon;
  const Complex i(0.0, 1.0);
  const CMat p = mat2(0, (1.0 - i) / 2.0, (1.0 + i) / 2.0, 0);
  const CMat q = mat2(0, (1.0 + i) / 2.0, (1.0 - i) / 2.0, 0);
  OpSum hermitian(2, {
                         {mat2(1, 0, 0, e), mat2(1, 0, 0, 0)},
                         {(1 - e) * p, p},
                         {(1 - e) * q, q},
                         {mat2(e, 0, 0, 1), mat2(0, 0, 0, 1)},
                     });

  ReferenceForms out{std::move(hermitian), std::nullopt};
  if (epsilon == 0.25) {
    const double w = 1.0 / 32.0;
    OpSum terms(2, {
                       {w * mat2(1, 2, 2, 16), mat2(279, 48, 48, 36)},
                       {w * mat2(3, 9.0 - i, 9.0 + i, 56), mat2(31, 6.0 - 6.0 * i, 6.0 + 6.0 * i, 4)},
                       {w * mat2(3, 9.0 + i, 9.0 - i, 56), mat2(31, 6.0 + 6.0 * i, 6.0 - 6.0 * i, 4)},
                       {w * mat2(1, 0, 0, 8), mat2(125, 12, 12, 20)},
                   });
    out.minus_one = certify(Form::minus_one, {std::move(terms), {-1, 1, 1, 1}}, {}, map.supermat);
  }
  return out;
}

}  // namespace ipfactor
