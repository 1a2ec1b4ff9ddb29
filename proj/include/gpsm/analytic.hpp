#pragma once

#include "gpsm/specfun.hpp"
#include "gpsm/txchain.hpp"

namespace gpsm {

/// Full system operating point for the closed-form pipeline.
struct SystemConfig {
  int n_t = 0;
  int n_r = 0;
  int n_a = 0;
  int m = 4;            // modulation order
  double rho = 0.0;     // power-splitting ratio
  double alpha = 1.0;   // noise split between RF and conversion stages
  double sigma2 = 1.0;  // total noise variance
  PowerMode mode = PowerMode::strict;

  double sigma2_a() const { return alpha * sigma2; }
  double sigma2_b() const { return (1.0 - alpha) * sigma2; }
  void validate() const;
};

struct LinkPerformance {
  double e_s_ant = 0.0;
  double e_s_mod = 0.0;
  double e_s_mod_coupled = 0.0;
  double e_b_eff = 0.0;
  double mib = 0.0;
  double rate = 0.0;
  double q_normalized = 0.0;
};

/// Noise variance from per-bit SNR: sigma2 = n_a / (snr_linear * k_eff).
double sigma2_from_snr_b(double snr_b_db, int n_a, int k_eff_bits);

/// Activation-pattern symbol error rate (upper bound): the nested integral
/// of the sorting detector's pairwise statistics over the concentration
/// law.  Depends on the RF-stage noise only; the power split cancels.
double spatial_ser(const SystemConfig& cfg);

/// Effective-noise inflation of the down-conversion branch relative to the
/// RF branch: kappa = 2 [sigma_a^2 + sigma_b^2/(1-rho)] / sigma_a^2.
double kappa(const SystemConfig& cfg);

/// Nearest-neighbour union bound on the modulated-symbol error rate,
/// averaged over the post-inversion SINR distribution.
double mod_ser_bound(const SystemConfig& cfg);

/// Number of antennas shared by two activation patterns.
int common_antennas(const std::vector<int>& pat_a,
                    const std::vector<int>& pat_b);

/// Modulated-symbol error rate in the presence of pattern errors: correct
/// detections contribute e_s_mod; a wrong pattern contributes e_s_mod on
/// its overlapping antennas and a random guess on the rest. Pattern errors
/// land on a minimum-distance neighbour of the true pattern with
/// overwhelming probability (confusing patterns that differ in d antennas
/// takes d separate noise-over-signal events), so the wrong-pattern term
/// averages over each true pattern's nearest neighbours in the book.
double mod_ser_coupled(const SystemConfig& cfg, const PatternBook& book,
                       double e_s_ant, double e_s_mod);

/// Mean Hamming distance from a k-bit word to the other 2^k - 1 words;
/// the bit-error correction factor for pattern-symbol errors.
double delta_correction(int k_ant);

/// e_b_eff = (delta * e_s_ant + n_a * e_s_mod_coupled) / k_eff.
double overall_ber(const SystemConfig& cfg, const PatternBook& book,
                   double e_s_ant, double e_s_mod_coupled);

/// Mutual information per bit of the induced binary symmetric channel.
double mib(double e_b_eff);

/// DCMC-style rate: k_eff * mib.
double dcmc_rate(const SystemConfig& cfg, const PatternBook& book,
                 double mib_value);

/// Full closed-form pipeline at one operating point (rho < 1).
LinkPerformance analytic_performance(const SystemConfig& cfg,
                                     const PatternBook& book);

/// Large-array deterministic limit: concentration replaces the channel
/// average, using the ratio-based limit beta -> n_t/n_r - 1 of the relaxed
/// normalization.  Self-contained; no pattern book materialized.
LinkPerformance asymptotic_point(const SystemConfig& cfg);

}  // namespace gpsm
