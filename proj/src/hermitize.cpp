#include "ipfactor/hermitize.hpp"

#include <algorithm>
#include <cmath>

#include "ipfactor/error.hpp"
#include "ipfactor/tolerances.hpp"

namespace ipfactor {

namespace {

void require_self_adjoint(const OpSum& s, const char* what) {
  SelfAdjointReport sa = is_self_adjoint(s);
  if (!sa.self_adjoint) {
    throw NotSelfAdjointError(std::string(what) + ": map is not self-adjoint (defect " +
                              std::to_string(sa.defect) + ")");
  }
}

// Equalizes ||left||_F and ||right||_F; the map is unchanged.
Pair balanced(Pair p) {
  const double l = p.left.norm();
  const double r = p.right.norm();
  if (l > 0.0 && r > 0.0) {
    const double s = std::sqrt(r / l);
    p.left *= s;
    p.right /= s;
  }
  return p;
}

void require_equivalent(const OpSum& out, const OpSum& in, const char* what) {
  SuperMat target = to_supermat(in);
  double dev = max_unit_deviation(out, target);
  if (dev > tolerances().residual * map_scale(target)) {
    throw HermitizeError(std::string(what) + ": rewritten map deviates by " + std::to_string(dev));
  }
}

}  // namespace

ConjInvolution compute_c(const OpSum& s) {
  require_self_adjoint(s, "compute_c");
  const std::vector<CMat> lefts = s.lefts();
  const std::vector<CMat> rights = s.rights();
  if (!linearly_independent(lefts) || !linearly_independent(rights)) {
    throw HermitizeError("compute_c: left or right set is not linearly independent; reduce first");
  }

  const auto m = static_cast<Eigen::Index>(s.size());
  const Eigen::Index n2 = static_cast<Eigen::Index>(s.dim()) * s.dim();
  CMat stack(n2, m);
  for (Eigen::Index j = 0; j < m; ++j) stack.col(j) = vec(lefts[j]);
  Eigen::ColPivHouseholderQR<CMat> qr(stack);

  ConjInvolution out;
  out.c.resize(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    CVec target = vec(lefts[k].adjoint());
    CVec w = qr.solve(target);
    double residual = (stack * w - target).norm() / std::max(1e-300, lefts[k].norm());
    out.residual = std::max(out.residual, residual);
    // E_k* = sum_j conj(c_kj) E_j, so w_j = conj(c_kj).
    out.c.row(k) = w.conjugate().transpose();
  }
  if (out.residual > 1e-8) {
    throw HermitizeError("compute_c: adjoint of a left factor is outside their span (residual " +
                         std::to_string(out.residual) + ")");
  }

  // Right-hand relation F_k* = sum_i c_ik F_i.
  for (Eigen::Index k = 0; k < m; ++k) {
    CMat combo = CMat::Zero(s.dim(), s.dim());
    for (Eigen::Index i = 0; i < m; ++i) combo += out.c(i, k) * rights[i];
    double dev = (combo - rights[k].adjoint()).norm() / std::max(1.0, rights[k].norm());
    if (dev > 1e-7) {
      throw HermitizeError("compute_c: right-hand relation fails (deviation " + std::to_string(dev) + ")");
    }
  }

  out.involution_defect = (out.c * out.c.conjugate() - CMat::Identity(m, m)).norm();
  if (out.involution_defect > 1e-8 * static_cast<double>(m)) {
    throw HermitizeError("compute_c: C conj(C) != I (defect " + std::to_string(out.involution_defect) + ")");
  }
  return out;
}

ConjSqrt conj_sqrt(const ConjInvolution& c) {
  const Eigen::Index m = c.c.rows();
  CMat log;
  try {
    log = log_unit_conj(c.c);
  } catch (const BranchError& e) {
    throw HermitizeError(std::string("conj_sqrt: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw HermitizeError(std::string("conj_sqrt: ") + e.what());
  }
  ConjSqrt out;
  out.d = mat_exp(log * 0.5);
  out.square_defect = (out.d * out.d - c.c).norm();
  out.involution_defect = (out.d * out.d.conjugate() - CMat::Identity(m, m)).norm();
  if (out.square_defect > 1e-7 * std::max(1.0, c.c.norm()) ||
      out.involution_defect > 1e-7 * static_cast<double>(m)) {
    throw HermitizeError("conj_sqrt: D^2 = C or D conj(D) = I check failed");
  }
  return out;
}

OpSum hermitize(const OpSum& s) {
  ConjInvolution c = compute_c(s);
  ConjSqrt d = conj_sqrt(c);

  const int n = s.dim();
  const auto m = static_cast<Eigen::Index>(s.size());
  std::vector<Pair> pairs;
  pairs.reserve(s.size());
  for (Eigen::Index k = 0; k < m; ++k) {
    CMat left = CMat::Zero(n, n);
    CMat right = CMat::Zero(n, n);
    double left_scale = 0.0;
    double right_scale = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      left += std::conj(d.d(k, j)) * s[j].left;
      right += d.d(j, k) * s[j].right;
      left_scale += std::abs(d.d(k, j)) * s[j].left.norm();
      right_scale += std::abs(d.d(j, k)) * s[j].right.norm();
    }
    if (herm_defect(left) > 1e-7 * std::max(1.0, left_scale) ||
        herm_defect(right) > 1e-7 * std::max(1.0, right_scale)) {
      throw HermitizeError("hermitize: mixed factors are not Hermitian");
    }
    pairs.push_back(balanced({hermitian_part(left), hermitian_part(right)}));
  }

  OpSum out(n, std::move(pairs));
  if (!linearly_independent(out.lefts()) || !linearly_independent(out.rights())) {
    throw HermitizeError("hermitize: output sets are not linearly independent");
  }
  require_equivalent(out, s, "hermitize");
  return out;
}

OpSum hermitize_doubling(const OpSum& s) {
  require_self_adjoint(s, "hermitize_doubling");
  const Complex i(0.0, 1.0);
  std::vector<Pair> pairs;
  pairs.reserve(2 * s.size());
  for (const Pair& p : s.pairs()) {
    pairs.push_back({(p.left + p.left.adjoint()) / 2.0, (p.right + p.right.adjoint()) / 2.0});
    pairs.push_back({(p.left - p.left.adjoint()) / (-2.0 * i), (p.right - p.right.adjoint()) / (2.0 * i)});
  }
  for (Pair& p : pairs) {
    p.left = hermitian_part(p.left);
    p.right = hermitian_part(p.right);
  }
  OpSum doubled(s.dim(), std::move(pairs));
  OpSum out = reduce_hermitian(doubled);
  std::vector<Pair> rescaled;
  for (const Pair& p : out.pairs()) rescaled.push_back(balanced(p));
  OpSum result(s.dim(), std::move(rescaled));
  try {
    require_equivalent(result, s, "hermitize_doubling");
  } catch (const HermitizeError& e) {
    throw NumericalError(e.what());
  }
  return result;
}

HermitianForm hermitian_form(const OpSum& s) {
  require_self_adjoint(s, "hermitian_form");
  OpSum reduced = reduce(s);
  if (reduced.is_zero_map()) return {reduced, false, {}};
  try {
    return {hermitize(reduced), false, {}};
  } catch (const HermitizeError& e) {
    return {hermitize_doubling(reduced), true, e.what()};
  }
}

}  // namespace ipfactor
