#ifndef IPFACTOR_MATSPACE_HPP
#define IPFACTOR_MATSPACE_HPP

// Dense complex matrix primitives and the spectral routines the rest of the
// library is built on. Matrices are plain Eigen values; HermMat and PosMat are
// checked refinements that can only be constructed from inputs that satisfy
// their invariants.

#include <complex>

#include <Eigen/Dense>

namespace ipfactor {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

/// Throws InvalidArgument when `m` has a NaN or infinite entry.
void require_finite(const CMat& m, const char* what);

/// Throws DimensionError unless `m` is square with dim >= 1.
void require_square(const CMat& m, const char* what);

CMat adjoint(const CMat& m);
Complex trace(const CMat& m);

/// Trace pairing <X, Y> = trace(Y* X); linear in X, conjugate-linear in Y.
Complex hs_inner(const CMat& x, const CMat& y);

/// Largest singular value.
double spectral_norm(const CMat& m);

/// n x n matrix with a single 1 at (row, col).
CMat matrix_unit(int n, int row, int col);

/// Column-stacking vectorization and its inverse.
CVec vec(const CMat& m);
CMat unvec(const CVec& v, int n);

/// (M + M*) / 2
CMat hermitian_part(const CMat& m);

/// ||M - M*||_F
double herm_defect(const CMat& m);

/// Scales `v` to unit Euclidean norm and rotates its first nonzero component
/// onto the positive real axis.
void normalize_phase(CVec& v);

class HermMat {
 public:
  /// Throws NotHermitianError when the defect exceeds tol_herm * max(1, ||m||_F).
  explicit HermMat(CMat m);

  /// Hermitian part of `m`, with no tolerance check.
  static HermMat project(const CMat& m);

  [[nodiscard]] const CMat& mat() const { return mat_; }
  [[nodiscard]] double defect() const { return defect_; }
  [[nodiscard]] int dim() const { return static_cast<int>(mat_.rows()); }

 private:
  struct Unchecked {};
  HermMat(CMat m, double defect, Unchecked);

  CMat mat_;
  double defect_ = 0.0;
};

class PosMat {
 public:
  /// Throws NotPositiveError unless min_eig > pos_margin * max(1, ||h||_2).
  explicit PosMat(HermMat h);
  explicit PosMat(CMat m) : PosMat(HermMat(std::move(m))) {}

  [[nodiscard]] const HermMat& herm() const { return herm_; }
  [[nodiscard]] const CMat& mat() const { return herm_.mat(); }
  [[nodiscard]] double min_eig() const { return min_eig_; }

 private:
  HermMat herm_;
  double min_eig_ = 0.0;
};

struct EigenSystem {
  RVec values;   // ascending
  CMat vectors;  // unitary, columns paired with `values`
};

/// Spectral decomposition H = V diag(values) V*.
///
/// Eigenvectors are phase-normalized; within a cluster of equal eigenvalues
/// columns are ordered lexicographically.
EigenSystem herm_eig(const HermMat& h);

/// Smallest eigenvalue of the Hermitian part of `h`.
double min_eig(const CMat& h);

/// Hermitian within tol_herm and min_eig > pos_margin * max(1, ||h||_2).
bool is_positive_matrix(const CMat& h);

/// min_eig(h) - pos_margin * max(1, ||h||_2); positive iff is_positive_matrix
/// (for Hermitian input).
double positivity_slack(const CMat& h);

struct PencilMin {
  double t0 = 0.0;
  CVec y0;
};

/// Smallest generalized eigenvalue of P y = t Q y with its unit eigenvector.
///
/// For t < t0 the matrix P - t Q is positive definite, and P - t0 Q is
/// singular with null vector y0.
PencilMin pencil_min(const HermMat& p, const PosMat& q);

/// Largest generalized eigenvalue of P y = t Q y.
double pencil_max(const HermMat& p, const PosMat& q);

/// Logarithm of a conjugate involution (C conj(C) = I) with purely imaginary
/// entries, so that exp(L) = C and conj(L) = -L.
///
/// The branch cut lies along arg z = pi + phi with phi scanned over
/// {0, pi/n, 2pi/n, ...} until no eigenvalue of C is within 1e-6 radians of
/// the cut. Any such branch gives a primary logarithm that is purely
/// imaginary, because the spectrum of C is closed under z -> 1/conj(z), which
/// keeps the argument. Throws BranchError when every scanned branch fails the
/// a-posteriori checks.
CMat log_unit_conj(const CMat& c);

/// Matrix exponential.
CMat mat_exp(const CMat& m);

}  // namespace ipfactor

#endif
