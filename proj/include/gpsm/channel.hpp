#pragma once

#include <Eigen/Dense>

#include "gpsm/rng.hpp"

namespace gpsm {

/// Fading / impairment model for one run.  Exactly one impairment (CSIT
/// error or antenna correlation) may be active at a time; that exclusivity
/// is enforced at configuration level, not here.
struct ChannelModel {
  int n_t = 0;
  int n_r = 0;
  double rho_t = 0.0;     // transmit-side exponential correlation
  double rho_r = 0.0;     // receive-side exponential correlation
  double sigma2_e = 0.0;  // CSIT error variance; known part has 1 - sigma2_e

  bool correlated() const { return rho_t > 0.0 || rho_r > 0.0; }
  void validate() const;
};

/// One channel draw: the matrix the signal actually propagates through and
/// the (possibly stale) matrix available to the precoder.
struct ChannelRealization {
  Eigen::MatrixXcd h_true;
  Eigen::MatrixXcd h_known;
};

/// i.i.d. CN(0,1) entries, fresh per super-symbol.
Eigen::MatrixXcd draw_iid_rayleigh(int n_r, int n_t, Rng& rng);

/// Exponential correlation matrix with entries rho^|i-j|.
Eigen::MatrixXd correlation_matrix(int n, double rho);

/// Principal (symmetric) square root of a positive-definite matrix.
Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& m);

/// Kronecker shaping: R_r^{1/2} G R_t^{1/2} (square roots are symmetric, so
/// the transpose on the transmit factor is immaterial).
Eigen::MatrixXcd apply_kronecker(const Eigen::MatrixXcd& g,
                                 const Eigen::MatrixXd& r_t,
                                 const Eigen::MatrixXd& r_r);

/// Splits a unit-variance draw into known and error parts: h_known carries
/// variance 1 - sigma2_e of the original draw and the error is a fresh draw
/// of variance sigma2_e, so h_true keeps unit entry variance and
/// h_true == h_known exactly when sigma2_e == 0.
ChannelRealization split_csit(const Eigen::MatrixXcd& h, double sigma2_e,
                              Rng& rng);

/// Precomputed correlation roots so per-trial draws skip the eigensolver.
struct KroneckerCache {
  Eigen::MatrixXd sqrt_r_t;
  Eigen::MatrixXd sqrt_r_r;
};

KroneckerCache make_kronecker_cache(const ChannelModel& model);

/// One full realization under the model.  Draw order (base matrix first,
/// then any CSIT-error matrix) is fixed for reproducibility.
ChannelRealization draw_realization(const ChannelModel& model, Rng& rng,
                                    const KroneckerCache* cache = nullptr);

}  // namespace gpsm
