#ifndef IPFACTOR_TOLERANCES_HPP
#define IPFACTOR_TOLERANCES_HPP

namespace ipfactor {

// All thresholds are relative: each is multiplied by max(1, norm of the
// quantity under test) at the point of use.
struct Tolerances {
  double herm = 1e-10;          // ||H - H*||_F
  double pos_margin = 1e-10;    // min eigenvalue vs ||H||_2
  double self_adjoint = 1e-8;   // ||M - M*||_F of the supermatrix
  double pd_margin = 1e-10;     // min eigenvalue of the supermatrix vs ||M||_2
  double rank_cutoff = 1e-9;    // singular value cutoff vs sigma_max
  double independence = 1e-8;   // smallest/largest singular value of a stacking
  double residual = 1e-8;       // max matrix-unit apply deviation
  double shift_margin = 1e-6;   // delta added to spectral shift bounds

  /// Every field multiplied by `factor`.
  [[nodiscard]] Tolerances scaled(double factor) const;
};

/// Process-wide defaults, scaled once by the IPFACTOR_TOL environment variable
/// when it holds a positive number.
const Tolerances& tolerances();

}  // namespace ipfactor

#endif
