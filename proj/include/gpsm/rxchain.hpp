#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "gpsm/rng.hpp"
#include "gpsm/txchain.hpp"

namespace gpsm {

/// Power-splitting receiver parameters.  A fraction rho of the received RF
/// power goes to the energy harvester; alpha apportions the total noise
/// variance between the RF stage (sigma2_a) and the down-conversion stage
/// (sigma2_b).
struct PowerSplitConfig {
  double rho = 0.0;
  double alpha = 1.0;
  double sigma2 = 1.0;
  double xi = 1.0;  // RF-to-DC conversion efficiency

  double sigma2_a() const { return alpha * sigma2; }
  double sigma2_b() const { return (1.0 - alpha) * sigma2; }
  void validate() const;
};

/// Baseband-equivalent signals at the two receiver stages, plus the raw
/// noise draws (kept so tests can pin the exact noise realization).
struct ReceivedSignals {
  Eigen::VectorXcd y_rf_equiv;  // post-split RF-stage signal
  Eigen::VectorXcd y_bb;        // after down-conversion noise
  Eigen::VectorXcd w_a;
  Eigen::VectorXcd w_b;
};

struct HarvestReport {
  double q_joules = 0.0;
  double q_normalized = 0.0;  // q(rho)/q(rho=1) = rho when xi = 1
};

struct DetectionResult {
  int k_hat = 0;
  std::vector<int> m_hat;
  std::vector<std::uint8_t> bits_hat;
  bool sd_correct = false;
  int mod_errors = 0;
};

/// y_a = sqrt(1-rho) (H x + w_a); y_b = y_a + w_b.  The same RF-stage noise
/// draw feeds both stages.
ReceivedSignals receive(const Eigen::VectorXcd& x,
                        const Eigen::MatrixXcd& h_true,
                        const PowerSplitConfig& cfg, Rng& rng);

/// Harvested energy per transmission, q = xi * rho * ||H x||^2.  Receiver
/// noise carries no transmitted energy and is excluded.  An optional
/// diagnostic captures the noise-inclusive RF power instead.
HarvestReport harvest(const Eigen::MatrixXcd& h_true,
                      const Eigen::VectorXcd& x, const PowerSplitConfig& cfg);
double harvest_with_noise_diag(const ReceivedSignals& y,
                               const PowerSplitConfig& cfg);

/// Non-coherent activation-pattern detection: argmax over the selected
/// patterns of the accumulated received power, ties to the lowest index.
/// Immune to the power-split scaling: any positive rescale of y_rf_equiv
/// leaves the argmax unchanged.
int detect_pattern(const ReceivedSignals& y, const PatternBook& book);

/// Per-stream nearest-point decisions on the down-converted signal at the
/// antennas of pattern k_hat.  The receiver models the post-inversion gain
/// as exactly 1 (what channel inversion guarantees for the known channel),
/// so the reference amplitude is sqrt((1-rho) beta / n_a).
std::vector<int> detect_symbols(const ReceivedSignals& y, int k_hat,
                                const PatternBook& book,
                                const Constellation& c, double beta,
                                const PowerSplitConfig& cfg);

/// Exact inverse of map_bits.
std::vector<std::uint8_t> demap(int k_hat, const std::vector<int>& m_hat,
                                const PatternBook& book,
                                const Constellation& c);

}  // namespace gpsm
