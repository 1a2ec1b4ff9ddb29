#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gpsm/analytic.hpp"
#include "gpsm/channel.hpp"
#include "gpsm/rxchain.hpp"

namespace gpsm {

enum class SweepKind { snr_b, rho, load_ratio };

/// Grid and sampling budget for one sweep.  The grid is the x axis of the
/// emitted curves: per-bit SNR in dB, splitting ratio, or load ratio
/// n_r/n_t depending on the kind.
struct SweepSpec {
  SweepKind kind = SweepKind::snr_b;
  std::vector<double> grid;
  long trials_per_point = 10000;
  std::uint64_t seed = 1;
  double confidence = 0.95;

  /// Grid strictly increasing, confidence in (0,1), trials positive.  The
  /// Monte Carlo sweeps additionally require trials_per_point >= 1000.
  void validate() const;
};

/// Tallies from a batch of end-to-end trials.  Merging partial tallies is
/// associative and commutative, so any partition of a trial range gives
/// identical totals.  The last three counters are diagnostics finer than
/// the emitted records: bit errors within the pattern bits, and stream
/// symbol / bit errors restricted to trials whose pattern decision was
/// correct (the waveform branch in isolation).
struct TrialCounters {
  long trials = 0;
  long sd_symbol_errors = 0;
  long mod_symbol_errors = 0;
  long bit_errors = 0;
  double harvested_sum = 0.0;
  long regenerated_channels = 0;
  long sd_bit_errors = 0;
  long mod_errors_sd_correct = 0;
  long mod_bit_errors_sd_correct = 0;

  TrialCounters& operator+=(const TrialCounters& o);
};

enum class RecordSource { analytic, montecarlo };

/// One point of one emitted curve; maps 1:1 onto a CSV row.
struct CurveRecord {
  double x = 0.0;
  RecordSource source = RecordSource::analytic;
  int n_a = 0;
  double e_s_ant = 0.0;
  double e_b_eff = 0.0;
  double mib = 0.0;
  double rate = 0.0;
  double q_normalized = 0.0;
  double ci_halfwidth = 0.0;
  long trials = 0;
};

/// Inverse standard-normal CDF (rational approximation polished by Newton
/// steps; good to ~1e-14 over (0,1)).
double normal_quantile(double p);

/// Half-width of the Wilson score interval for `errors` successes in `n`
/// Bernoulli trials at the given two-sided confidence.
double wilson_halfwidth(long errors, long n, double confidence);

/// Substream seed for one (antenna count, grid index) sweep point.  Only
/// those two values and the base seed enter, so sweeps that differ in
/// rho/alpha/impairments reuse the same random numbers point for point.
std::uint64_t point_seed(std::uint64_t base_seed, int n_a,
                         std::size_t grid_index);

/// Stream-level symbol errors of one detection against the transmitted
/// super-symbol.  Streams whose antenna appears in both patterns compare
/// directly; lost streams pair in index order with the detector's readings
/// on spurious antennas (those carry noise only).
int count_stream_errors(const PatternBook& book, const Constellation& c,
                        const SuperSymbol& sent, const DetectionResult& det);

/// One end-to-end trial: bits -> super-symbol -> fresh channel -> channel
/// inversion -> power-split receiver -> harvest + two-step detection ->
/// counters.  Numerically singular channels are redrawn (counted).
/// Requires rho < 1; at rho = 1 no baseband signal remains.
TrialCounters run_trial(const SystemConfig& cfg, const PatternBook& book,
                        const Constellation& c, const ChannelModel& model,
                        Rng& rng, const KroneckerCache* cache = nullptr);

/// Trials 0..trials-1, each on its own seed-and-index-derived substream, so
/// totals are identical for every worker count.
TrialCounters run_trials(const SystemConfig& cfg, const PatternBook& book,
                         const Constellation& c, const ChannelModel& model,
                         std::uint64_t seed, long trials, int workers);

/// Error-rate curves over a per-bit SNR grid for each requested stream
/// count (n_a == n_r rows are the conventional benchmark).  Emits an
/// analytic record per point, plus a Monte Carlo record when requested.
std::vector<CurveRecord> sweep_snr(const SystemConfig& base,
                                   const ChannelModel& model,
                                   const std::vector<int>& n_a_list,
                                   const SweepSpec& spec, int workers,
                                   bool with_montecarlo);

/// Rate-energy trade-off over a splitting-ratio grid at fixed per-bit SNR.
/// In sd_only mode the information metrics cover the pattern bits alone.
/// All rho points of one stream count share a single random substream, so
/// split-invariant quantities come out exactly constant across the grid.
/// The rho = 1 grid point emits a single energy-only record (q = 1, NaN
/// information fields): everything reaches the harvester.
std::vector<CurveRecord> sweep_rho(const SystemConfig& base,
                                   const ChannelModel& model,
                                   const std::vector<int>& n_a_list,
                                   double snr_b_db, const SweepSpec& spec,
                                   int workers, bool sd_only,
                                   bool with_montecarlo);

/// Large-array deterministic-limit curves over a load-ratio grid
/// (x = n_r/n_t), per splitting ratio and stream count.  A stream count of
/// 0 requests the conventional benchmark n_a = n_r at every point.
/// Analytic only.
std::vector<CurveRecord> sweep_load_ratio(int n_t, int m,
                                          const std::vector<int>& n_a_list,
                                          const std::vector<double>& rho_list,
                                          double snr_b_db, double alpha,
                                          const SweepSpec& spec);

/// Fixed, versioned column schema; one row per record.
void write_csv(std::ostream& os, const std::vector<CurveRecord>& records);

}  // namespace gpsm
