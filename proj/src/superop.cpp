#include "ipfactor/superop.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ipfactor/error.hpp"
#include "ipfactor/tolerances.hpp"

namespace ipfactor {

namespace {

void rotate_to_real(CVec& lead, CVec& partner) {
  double largest = lead.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < lead.size(); ++i) {
    if (std::abs(lead(i)) > 1e-8 * largest) {
      Complex phase = std::conj(lead(i)) / std::abs(lead(i));
      lead *= phase;
      partner *= phase;
      return;
    }
  }
}

// Orthonormal basis of the Hermitian n x n matrices under the trace pairing.
std::vector<CMat> hermitian_basis(int n) {
  std::vector<CMat> basis;
  basis.reserve(static_cast<std::size_t>(n) * n);
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i) basis.push_back(matrix_unit(n, i, i));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      CMat sym = CMat::Zero(n, n);
      sym(i, j) = r;
      sym(j, i) = r;
      basis.push_back(sym);
      CMat anti = CMat::Zero(n, n);
      anti(i, j) = Complex(0.0, r);
      anti(j, i) = Complex(0.0, -r);
      basis.push_back(anti);
    }
  }
  return basis;
}

}  // namespace

OpSum::OpSum(int dim, std::vector<Pair> pairs) : dim_(dim), pairs_(std::move(pairs)) {
  if (dim_ < 1) throw DimensionError("OpSum: dim must be >= 1");
  for (const Pair& p : pairs_) {
    if (p.left.rows() != dim_ || p.left.cols() != dim_ || p.right.rows() != dim_ ||
        p.right.cols() != dim_) {
      throw DimensionError("OpSum: pair is not " + std::to_string(dim_) + "x" + std::to_string(dim_));
    }
    require_finite(p.left, "OpSum");
    require_finite(p.right, "OpSum");
  }
}

std::vector<CMat> OpSum::lefts() const {
  std::vector<CMat> out;
  out.reserve(pairs_.size());
  for (const Pair& p : pairs_) out.push_back(p.left);
  return out;
}

std::vector<CMat> OpSum::rights() const {
  std::vector<CMat> out;
  out.reserve(pairs_.size());
  for (const Pair& p : pairs_) out.push_back(p.right);
  return out;
}

SuperMat::SuperMat(int dim, CMat mat) : dim_(dim), mat_(std::move(mat)) {
  if (dim_ < 1) throw DimensionError("SuperMat: dim must be >= 1");
  const Eigen::Index n2 = static_cast<Eigen::Index>(dim_) * dim_;
  if (mat_.rows() != n2 || mat_.cols() != n2) throw DimensionError("SuperMat: matrix is not n^2 x n^2");
  require_finite(mat_, "SuperMat");
}

CMat apply(const OpSum& s, const CMat& x) {
  if (x.rows() != s.dim() || x.cols() != s.dim()) throw DimensionError("apply: dimension mismatch");
  CMat out = CMat::Zero(s.dim(), s.dim());
  for (const Pair& p : s.pairs()) out.noalias() += p.left * x * p.right;
  return out;
}

CMat apply(const SuperMat& s, const CMat& x) {
  if (x.rows() != s.dim() || x.cols() != s.dim()) throw DimensionError("apply: dimension mismatch");
  return unvec(s.mat() * vec(x), s.dim());
}

OpSum concat(const OpSum& a, const OpSum& b) {
  if (a.dim() != b.dim()) throw DimensionError("concat: dimension mismatch");
  std::vector<Pair> pairs = a.pairs();
  pairs.insert(pairs.end(), b.pairs().begin(), b.pairs().end());
  return OpSum(a.dim(), std::move(pairs));
}

SuperMat to_supermat(const OpSum& s) {
  const int n = s.dim();
  const Eigen::Index n2 = static_cast<Eigen::Index>(n) * n;
  CMat m = CMat::Zero(n2, n2);
  // Block (a, c) of R^T kron L is R(c, a) * L.
  for (const Pair& p : s.pairs()) {
    for (int a = 0; a < n; ++a) {
      for (int c = 0; c < n; ++c) {
        m.block(a * n, c * n, n, n) += p.right(c, a) * p.left;
      }
    }
  }
  return SuperMat(n, std::move(m));
}

CMat realign(const SuperMat& s) {
  const int n = s.dim();
  const Eigen::Index n2 = static_cast<Eigen::Index>(n) * n;
  CMat r(n2, n2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) r(i * n + j, k * n + l) = s.mat()(k * n + i, l * n + j);
  return r;
}

int realignment_rank(const SuperMat& s) {
  Eigen::BDCSVD<CMat> svd(realign(s));
  const RVec& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cutoff = tolerances().rank_cutoff * sv(0);
  return static_cast<int>((sv.array() > cutoff).count());
}

OpSum from_supermat(const SuperMat& s) {
  const int n = s.dim();
  Eigen::BDCSVD<CMat> svd(realign(s), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVec& sv = svd.singularValues();
  std::vector<Pair> pairs;
  if (sv.size() == 0 || sv(0) == 0.0) return OpSum(n, {});

  const double cutoff = tolerances().rank_cutoff * sv(0);
  for (Eigen::Index r = 0; r < sv.size() && sv(r) > cutoff; ++r) {
    CVec u = svd.matrixU().col(r);
    CVec v = svd.matrixV().col(r);
    rotate_to_real(u, v);
    const double root = std::sqrt(sv(r));
    // u indexes (i, j) row-major; conj(v) is the column-stacked right factor.
    CMat left = Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                                               Eigen::RowMajor>>(u.data(), n, n) *
                root;
    CMat right = unvec(v.conjugate() * root, n);
    pairs.push_back({std::move(left), std::move(right)});
  }
  return OpSum(n, std::move(pairs));
}

OpSum reduce(const OpSum& s) { return from_supermat(to_supermat(s)); }

OpSum reduce_hermitian(const OpSum& s) {
  const int n = s.dim();
  const auto basis = hermitian_basis(n);
  const Eigen::Index n2 = static_cast<Eigen::Index>(basis.size());
  const double herm_tol = tolerances().herm;

  Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(n2, n2);
  for (const Pair& p : s.pairs()) {
    if (herm_defect(p.left) > herm_tol * std::max(1.0, p.left.norm()) ||
        herm_defect(p.right) > herm_tol * std::max(1.0, p.right.norm())) {
      throw NotHermitianError("reduce_hermitian: pair is not Hermitian");
    }
    Eigen::VectorXd a(n2), b(n2);
    for (Eigen::Index q = 0; q < n2; ++q) {
      a(q) = hs_inner(p.left, basis[q]).real();
      b(q) = hs_inner(p.right, basis[q]).real();
    }
    coeffs += a * b.transpose();
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(coeffs, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVec& sv = svd.singularValues();
  std::vector<Pair> pairs;
  if (sv(0) == 0.0) return OpSum(n, {});
  const double cutoff = tolerances().rank_cutoff * sv(0);
  for (Eigen::Index r = 0; r < n2 && sv(r) > cutoff; ++r) {
    Eigen::VectorXd u = svd.matrixU().col(r);
    Eigen::VectorXd v = svd.matrixV().col(r);
    Eigen::Index lead = 0;
    u.cwiseAbs().maxCoeff(&lead);
    if (u(lead) < 0.0) {
      u = -u;
      v = -v;
    }
    const double root = std::sqrt(sv(r));
    CMat left = CMat::Zero(n, n);
    CMat right = CMat::Zero(n, n);
    for (Eigen::Index q = 0; q < n2; ++q) {
      left += (root * u(q)) * basis[q];
      right += (root * v(q)) * basis[q];
    }
    pairs.push_back({hermitian_part(left), hermitian_part(right)});
  }
  return OpSum(n, std::move(pairs));
}

OpSum adjoint_superop(const OpSum& s) {
  std::vector<Pair> pairs;
  pairs.reserve(s.size());
  for (const Pair& p : s.pairs()) pairs.push_back({p.left.adjoint(), p.right.adjoint()});
  return OpSum(s.dim(), std::move(pairs));
}

SelfAdjointReport is_self_adjoint(const SuperMat& s) {
  SelfAdjointReport r;
  r.defect = herm_defect(s.mat()) / std::max(1.0, s.mat().norm());
  r.self_adjoint = r.defect <= tolerances().self_adjoint;
  return r;
}

SelfAdjointReport is_self_adjoint(const OpSum& s) { return is_self_adjoint(to_supermat(s)); }

DefinitenessReport is_positive_definite(const SuperMat& s) {
  SelfAdjointReport sa = is_self_adjoint(s);
  if (!sa.self_adjoint) {
    throw NotSelfAdjointError("map is not self-adjoint (defect " + std::to_string(sa.defect) + ")");
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(s.mat()));
  const RVec& ev = es.eigenvalues();
  DefinitenessReport r;
  r.min_eig = ev(0);
  const double norm2 = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  r.positive = r.min_eig > tolerances().pd_margin * norm2;
  CVec w = es.eigenvectors().col(0);
  normalize_phase(w);
  r.witness = unvec(w, s.dim());
  return r;
}

DefinitenessReport is_positive_definite(const OpSum& s) { return is_positive_definite(to_supermat(s)); }

Complex rank_one_pairing(const OpSum& s, const CVec& x, const CVec& y) {
  if (x.size() != s.dim() || y.size() != s.dim()) throw DimensionError("rank_one_pairing: dimension mismatch");
  Complex total = 0.0;
  for (const Pair& p : s.pairs()) {
    total += x.dot(p.left * x) * y.dot(p.right * y);  // dot conjugates its first argument
  }
  return total;
}

bool linearly_independent(const std::vector<CMat>& mats) {
  if (mats.empty()) return true;
  const Eigen::Index len = mats.front().size();
  if (static_cast<Eigen::Index>(mats.size()) > len) return false;
  CMat stack(static_cast<Eigen::Index>(mats.size()), len);
  for (std::size_t i = 0; i < mats.size(); ++i) {
    if (mats[i].size() != len) throw DimensionError("linearly_independent: size mismatch");
    stack.row(static_cast<Eigen::Index>(i)) = vec(mats[i]).transpose();
  }
  Eigen::JacobiSVD<CMat> svd(stack);
  const RVec& sv = svd.singularValues();
  if (sv(0) == 0.0) return false;
  return sv(sv.size() - 1) > tolerances().independence * sv(0);
}

double max_unit_deviation(const OpSum& a, const SuperMat& b) {
  if (a.dim() != b.dim()) throw DimensionError("max_unit_deviation: dimension mismatch");
  const int n = a.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      CMat u = matrix_unit(n, i, j);
      worst = std::max(worst, (ipfactor::apply(a, u) - ipfactor::apply(b, u)).norm());
    }
  return worst;
}

double max_unit_deviation(const OpSum& a, const OpSum& b) {
  if (a.dim() != b.dim()) throw DimensionError("max_unit_deviation: dimension mismatch");
  const int n = a.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      CMat u = matrix_unit(n, i, j);
      worst = std::max(worst, (ipfactor::apply(a, u) - ipfactor::apply(b, u)).norm());
    }
  return worst;
}

double map_scale(const SuperMat& s) { return std::max(1.0, s.mat().norm()); }

}  // namespace ipfactor
