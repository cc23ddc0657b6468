#include "ipfactor/matspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "ipfactor/error.hpp"
#include "ipfactor/tolerances.hpp"

namespace ipfactor {

void require_finite(const CMat& m, const char* what) {
  if (!m.allFinite()) throw InvalidArgument(std::string(what) + ": non-finite entry");
}

void require_square(const CMat& m, const char* what) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

CMat adjoint(const CMat& m) { return m.adjoint(); }

Complex trace(const CMat& m) { return m.trace(); }

Complex hs_inner(const CMat& x, const CMat& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw DimensionError("hs_inner: dimension mismatch");
  }
  // trace(Y* X) = sum_ij conj(y_ij) x_ij
  return (y.conjugate().cwiseProduct(x)).sum();
}

double spectral_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues()(0);
}

CMat matrix_unit(int n, int row, int col) {
  CMat u = CMat::Zero(n, n);
  u(row, col) = 1.0;
  return u;
}

CVec vec(const CMat& m) {
  return Eigen::Map<const CVec>(m.data(), m.size());
}

CMat unvec(const CVec& v, int n) {
  if (v.size() != static_cast<Eigen::Index>(n) * n) throw DimensionError("unvec: length is not n^2");
  return Eigen::Map<const CMat>(v.data(), n, n);
}

CMat hermitian_part(const CMat& m) { return (m + m.adjoint()) * 0.5; }

double herm_defect(const CMat& m) { return (m - m.adjoint()).norm(); }

void normalize_phase(CVec& v) {
  double norm = v.norm();
  if (norm == 0.0) return;
  v /= norm;
  // Threshold keeps roundoff-level leading entries from picking the phase.
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = std::abs(v(i));
      return;
    }
  }
}

HermMat::HermMat(CMat m) : mat_(std::move(m)) {
  require_square(mat_, "HermMat");
  require_finite(mat_, "HermMat");
  defect_ = herm_defect(mat_);
  if (defect_ > tolerances().herm * std::max(1.0, mat_.norm())) {
    throw NotHermitianError("matrix is not Hermitian (defect " + std::to_string(defect_) + ")");
  }
}

HermMat::HermMat(CMat m, double defect, Unchecked) : mat_(std::move(m)), defect_(defect) {}

HermMat HermMat::project(const CMat& m) {
  require_square(m, "HermMat::project");
  require_finite(m, "HermMat::project");
  return HermMat(hermitian_part(m), 0.0, Unchecked{});
}

PosMat::PosMat(HermMat h) : herm_(std::move(h)) {
  min_eig_ = ipfactor::min_eig(herm_.mat());
  double scale = std::max(1.0, spectral_norm(herm_.mat()));
  if (!(min_eig_ > tolerances().pos_margin * scale)) {
    throw NotPositiveError("matrix is not positive definite (min eigenvalue " +
                           std::to_string(min_eig_) + ")");
  }
}

namespace {

bool lex_less(const CVec& a, const CVec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
    if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
  }
  return false;
}

}  // namespace

EigenSystem herm_eig(const HermMat& h) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(h.mat()));
  if (es.info() != Eigen::Success) throw NumericalError("herm_eig: eigensolver did not converge");

  const Eigen::Index n = h.mat().rows();
  CMat vectors = es.eigenvectors();
  for (Eigen::Index k = 0; k < n; ++k) {
    CVec col = vectors.col(k);
    normalize_phase(col);
    vectors.col(k) = col;
  }

  const RVec& values = es.eigenvalues();
  double tie = 1e-12 * std::max(1.0, values.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (std::abs(values(a) - values(b)) > tie) return values(a) < values(b);
    return lex_less(vectors.col(a), vectors.col(b));
  });

  EigenSystem out{RVec(n), CMat(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = values(order[k]);
    out.vectors.col(k) = vectors.col(order[k]);
  }
  return out;
}

double min_eig(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double positivity_slack(const CMat& h) {
  CMat hp = hermitian_part(h);
  Eigen::SelfAdjointEigenSolver<CMat> es(hp, Eigen::EigenvaluesOnly);
  const RVec& ev = es.eigenvalues();
  double norm2 = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  return ev(0) - tolerances().pos_margin * std::max(1.0, norm2);
}

bool is_positive_matrix(const CMat& h) {
  if (h.rows() != h.cols() || h.rows() == 0 || !h.allFinite()) return false;
  if (herm_defect(h) > tolerances().herm * std::max(1.0, h.norm())) return false;
  return positivity_slack(h) > 0.0;
}

PencilMin pencil_min(const HermMat& p, const PosMat& q) {
  if (p.dim() != q.herm().dim()) throw DimensionError("pencil_min: dimension mismatch");

  // With Q = L L*, P y = t Q y becomes (L^-1 P L^-*) z = t z, y = L^-* z.
  Eigen::LLT<CMat> llt(q.mat());
  if (llt.info() != Eigen::Success) throw NotPositiveError("pencil_min: Q is not positive definite");
  const Eigen::Index n = p.dim();
  CMat l_inv = llt.matrixL().solve(CMat::Identity(n, n));
  CMat reduced = hermitian_part(l_inv * p.mat() * l_inv.adjoint());

  Eigen::SelfAdjointEigenSolver<CMat> es(reduced);
  if (es.info() != Eigen::Success) throw NumericalError("pencil_min: eigensolver did not converge");

  PencilMin out;
  out.t0 = es.eigenvalues()(0);
  out.y0 = l_inv.adjoint() * es.eigenvectors().col(0);
  normalize_phase(out.y0);
  return out;
}

double pencil_max(const HermMat& p, const PosMat& q) {
  return -pencil_min(HermMat::project(-p.mat()), q).t0;
}

namespace {

constexpr double kCutClearance = 1e-6;

double angular_distance(double a, double b) {
  double d = std::remainder(a - b, 2.0 * std::numbers::pi);
  return std::abs(d);
}

}  // namespace

CMat log_unit_conj(const CMat& c) {
  require_square(c, "log_unit_conj");
  require_finite(c, "log_unit_conj");
  const Eigen::Index n = c.rows();
  const CMat identity = CMat::Identity(n, n);

  double involution_defect = (c * c.conjugate() - identity).norm();
  if (involution_defect > 1e-8 * static_cast<double>(n)) {
    throw InvalidArgument("log_unit_conj: C conj(C) != I (defect " +
                          std::to_string(involution_defect) + ")");
  }

  Eigen::ComplexEigenSolver<CMat> ces(c, /*computeEigenvectors=*/false);
  if (ces.info() != Eigen::Success) throw BranchError("log_unit_conj: eigensolver did not converge");
  const CVec& eigenvalues = ces.eigenvalues();

  const double c_scale = std::max(1.0, c.norm());
  std::string last_failure = "every scanned cut passes within 1e-6 of an eigenvalue";
  for (Eigen::Index k = 0; k < 2 * n; ++k) {
    const double phi = std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    const double cut = std::numbers::pi + phi;
    bool clear = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (angular_distance(std::arg(eigenvalues(i)), cut) < kCutClearance) {
        clear = false;
        break;
      }
    }
    if (!clear) continue;

    // log_phi(z) = i phi + Log(e^{-i phi} z) places the cut on arg z = pi + phi.
    const Complex rotation = std::polar(1.0, -phi);
    CMat log = (rotation * c).log();
    log.diagonal().array() += Complex(0.0, phi);
    if (!log.allFinite()) {
      last_failure = "non-finite logarithm";
      continue;
    }

    double skew = (log + log.conjugate()).norm();
    if (skew > 1e-7 * std::max(1.0, log.norm())) {
      last_failure = "logarithm is not purely imaginary (defect " + std::to_string(skew) + ")";
      continue;
    }
    CMat imaginary = (log - log.conjugate()) * 0.5;
    double round_trip = (imaginary.exp() - c).norm();
    if (round_trip > 1e-8 * c_scale) {
      last_failure = "exp(L) != C (defect " + std::to_string(round_trip) + ")";
      continue;
    }
    return imaginary;
  }
  throw BranchError("log_unit_conj: " + last_failure);
}

CMat mat_exp(const CMat& m) {
  require_square(m, "mat_exp");
  return m.exp();
}

}  // namespace ipfactor
