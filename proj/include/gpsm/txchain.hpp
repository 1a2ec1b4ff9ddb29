#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace gpsm {

/// The channel matrix handed to the precoder is (numerically) rank
/// deficient; the harness reacts by redrawing the channel.
class SingularChannel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Receive-antenna activation patterns.  Antenna indices are 0-based.
/// `selected` holds the 2^k_ant information-bearing patterns, taken
/// lexicographic-first from the full enumeration.
struct PatternBook {
  int n_r = 0;
  int n_a = 0;
  int k_ant = 0;
  std::vector<std::vector<int>> all_patterns;
  std::vector<std::vector<int>> selected;
};

/// Exact binomial(n, k); throws on 64-bit overflow.
unsigned long long pattern_count(int n, int k);

/// floor(log2 binomial(n_r, n_a)) without materializing the patterns, valid
/// for the large arrays of the asymptotic sweeps.
int k_ant_bits(long long n_r, long long n_a);

PatternBook build_pattern_book(int n_r, int n_a);

/// Unit-average-energy constellation with Gray-coded labels.
struct Constellation {
  int m = 0;      // order
  int k_mod = 0;  // bits per symbol
  std::vector<std::complex<double>> points;
  double d_min = 0.0;
  double n_min = 0.0;  // average nearest-neighbour multiplicity
  double e_s_o = 0.0;  // random-guess symbol error rate, (m-1)/m
};

/// Supported orders: 2 (BPSK), 4 (QPSK), 16 (square QAM).
Constellation make_constellation(int m);

/// One super-symbol: a pattern choice plus the modulated streams, and its
/// dense length-n_r representation (zeros on inactive antennas).
struct SuperSymbol {
  int pattern_index = 0;
  Eigen::VectorXcd modulated;
  Eigen::VectorXcd dense;
};

int k_eff(const PatternBook& book, const Constellation& c);

/// First k_ant bits pick the pattern (natural binary, MSB first), the rest
/// map per stream onto the constellation.
SuperSymbol map_bits(const std::vector<std::uint8_t>& bits,
                     const PatternBook& book, const Constellation& c);

/// Thin QR factorization of h_known^H; everything channel-inversion needs.
/// h_known^H = q r with q (n_t x n_r, orthonormal columns) and r upper
/// triangular, so H H^H = r^H r and P = q r^{-H}.
struct CiFactor {
  Eigen::MatrixXcd q;
  Eigen::MatrixXcd r;
};

/// Factorizes and screens out numerically singular channels (smallest
/// singular value below 1e-10, confirmed by an exact decomposition when the
/// fast estimate is suspicious).
CiFactor ci_factor(const Eigen::MatrixXcd& h_known);

enum class PowerMode { strict, relaxed };

struct Precoder {
  Eigen::MatrixXcd p;  // n_t x n_r
  PowerMode mode = PowerMode::strict;
  double beta = 1.0;
};

/// Channel-inversion precoding matrix P = H^H (H H^H)^{-1}.
Eigen::MatrixXcd ci_precoder(const Eigen::MatrixXcd& h_known);

/// Per-super-symbol normalization: beta = n_a / (s^H (H H^H)^{-1} s).
/// Makes every transmitted vector exactly unit energy.
double beta_strict(const CiFactor& f, const SuperSymbol& s);
double beta_strict(const Eigen::MatrixXcd& h_known, const SuperSymbol& s);

/// Per-channel normalization: beta = n_r / trace[(H H^H)^{-1}]; unit
/// transmit energy in expectation over symbols.
double beta_relaxed(const CiFactor& f);
double beta_relaxed(const Eigen::MatrixXcd& h_known);

/// x = sqrt(beta / n_a) P s.
Eigen::VectorXcd transmit(const SuperSymbol& s, const Precoder& pre);

/// Same transmit signal computed from the retained factorization without
/// forming P; the Monte-Carlo hot path.
Eigen::VectorXcd transmit_with_factor(const CiFactor& f, const SuperSymbol& s,
                                      double beta);

}  // namespace gpsm
