// End-to-end acceptance suite for the link-level engine: eleven checks
// covering the throughput table, the exact split-invariance of pattern
// detection, closed-form/Monte-Carlo agreement across the SNR sweep, the
// harvest-induced waveform shift, the combinatorial correction factors, the
// normalization concentration law, trade-off flatness, rate orderings, energy
// accounting, and impaired-channel degradation.  Each check prints one
// PASS/FAIL line; the exit status is 0 only when every check passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <iterator>
#include <limits>
#include <string>
#include <vector>

#include "gpsm/channel.hpp"
#include "gpsm/harness.hpp"
#include "gpsm/rxchain.hpp"
#include "gpsm/txchain.hpp"

using namespace gpsm;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

std::vector<std::uint8_t> random_bits(int n, Rng& rng) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng.word() & 1u);
  return bits;
}

// Channel draw with the same singular-screen policy as the harness: redraw
// the (measure-zero) numerically singular cases.
Eigen::MatrixXcd draw_invertible(int n_r, int n_t, Rng& rng, CiFactor& f) {
  for (;;) {
    Eigen::MatrixXcd h = draw_iid_rayleigh(n_r, n_t, rng);
    try {
      f = ci_factor(h);
      return h;
    } catch (const SingularChannel&) {
    }
  }
}

// Abscissa where a decreasing curve crosses `level`, by log-linear
// interpolation between the first bracketing grid points; NaN if no bracket.
double db_crossing(const std::vector<double>& xs, const std::vector<double>& ys,
                   double level) {
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (ys[i] >= level && ys[i + 1] < level && ys[i] > 0.0 &&
        ys[i + 1] > 0.0) {
      const double la = std::log10(ys[i]);
      const double lb = std::log10(ys[i + 1]);
      const double ll = std::log10(level);
      return xs[i] + (xs[i + 1] - xs[i]) * (la - ll) / (la - lb);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

const ChannelModel kCleanModel{16, 8, 0.0, 0.0, 0.0};

// ---------------------------------------------------------------------------
// 1. Throughput table: bits per super-symbol over the stream counts of the
//    {16,8} QPSK configuration.
Outcome check_throughput_table() {
  const Constellation qpsk = make_constellation(4);
  const int streams[] = {1, 2, 3, 4, 5, 6, 8};
  const int expect[] = {5, 8, 11, 14, 15, 16, 16};
  for (std::size_t i = 0; i < std::size(streams); ++i) {
    const PatternBook book = build_pattern_book(8, streams[i]);
    const int got = k_eff(book, qpsk);
    if (got != expect[i])
      return {false, fmt("n_a=%d gives k_eff=%d, expected %d", streams[i], got,
                         expect[i])};
  }
  return {true, "k_eff = {5,8,11,14,15,16,16} for n_a = {1..6,8}"};
}

// ---------------------------------------------------------------------------
// 2. Pattern decisions are exactly invariant to the splitting ratio when the
//    noise draws are shared: the RF-stage scaling sqrt(1-rho) multiplies
//    every hypothesis power equally.
Outcome check_pattern_invariance() {
  const Constellation qpsk = make_constellation(4);
  const PatternBook book = build_pattern_book(8, 2);
  const int kb = k_eff(book, qpsk);
  const double sigma2 = sigma2_from_snr_b(0.0, 2, kb);
  const long trials = 10000;
  long mismatches = 0;
  for (long t = 0; t < trials; ++t) {
    Rng rng(5101, static_cast<std::uint64_t>(t));
    const SuperSymbol s = map_bits(random_bits(kb, rng), book, qpsk);
    CiFactor f;
    const Eigen::MatrixXcd h = draw_invertible(8, 16, rng, f);
    const double beta = beta_strict(f, s);
    const Eigen::VectorXcd x = transmit_with_factor(f, s, beta);
    int k_ref = -1;
    for (int r = 0; r < 10; ++r) {
      const PowerSplitConfig ps{0.1 * r, 0.4, sigma2, 1.0};
      Rng noise(5102, static_cast<std::uint64_t>(t));  // shared across rho
      const ReceivedSignals y = receive(x, h, ps, noise);
      const int k_hat = detect_pattern(y, book);
      if (r == 0)
        k_ref = k_hat;
      else if (k_hat != k_ref)
        ++mismatches;
    }
  }
  if (mismatches != 0)
    return {false, fmt("%ld pattern decisions changed with rho", mismatches)};
  return {true, fmt("0 discrepancies over %ld trials x 10 rho values", trials)};
}

// ---------------------------------------------------------------------------
// 3. Closed forms against Monte Carlo over the SNR sweep ({16,8}, QPSK,
//    rho=0, alpha=1, n_a in {1,2,4}).  Wherever the measured pattern SER
//    lies in [1e-3, 1e-1] the point is resolved with >= 1e6 trials; the
//    pattern-SER bound must sit within x[0.8, 1.5] of the measurement and
//    not below it by more than 3 standard errors, and the overall BER
//    prediction within x[0.8, 1.3].
Outcome check_snr_agreement() {
  const Constellation qpsk = make_constellation(4);
  std::vector<double> grid;
  for (int s = -10; s <= 12; s += 2) grid.push_back(s);
  int windowed = 0;
  double ratio_lo = 1e9, ratio_hi = -1e9, bratio_lo = 1e9, bratio_hi = -1e9;
  for (int n_a : {1, 2, 4}) {
    const PatternBook book = build_pattern_book(8, n_a);
    const int kb = k_eff(book, qpsk);
    int windowed_here = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      SystemConfig cfg{16, 8,   n_a, 4, 0.0, 1.0, sigma2_from_snr_b(grid[i],
                                                                    n_a, kb),
                       PowerMode::strict};
      TrialCounters tc = run_trials(cfg, book, qpsk, kCleanModel,
                                    point_seed(5301, n_a, i), 200000, 1);
      double ser =
          static_cast<double>(tc.sd_symbol_errors) / static_cast<double>(tc.trials);
      double ber = static_cast<double>(tc.bit_errors) /
                   (static_cast<double>(tc.trials) * kb);
      // refine every point whose first pass lands near the comparison
      // window; the margin makes window membership decided at full depth
      if ((ser > 5e-4 && ser < 0.12) || (ber > 5e-4 && ber < 0.12)) {
        tc += run_trials(cfg, book, qpsk, kCleanModel, point_seed(5302, n_a, i),
                         800000, 1);
        ser = static_cast<double>(tc.sd_symbol_errors) /
              static_cast<double>(tc.trials);
        ber = static_cast<double>(tc.bit_errors) /
              (static_cast<double>(tc.trials) * kb);
      }
      if (ser < 1e-3 || ser > 1e-1) continue;
      if (tc.trials < 1000000)
        return {false, fmt("window point n_a=%d snr=%g under-sampled (%ld)",
                           n_a, grid[i], tc.trials)};
      ++windowed;
      ++windowed_here;
      const LinkPerformance perf = analytic_performance(cfg, book);
      const double se =
          std::sqrt(ser * (1.0 - ser) / static_cast<double>(tc.trials));
      const double ratio = perf.e_s_ant / ser;
      const double bratio = perf.e_b_eff / ber;
      ratio_lo = std::min(ratio_lo, ratio);
      ratio_hi = std::max(ratio_hi, ratio);
      bratio_lo = std::min(bratio_lo, bratio);
      bratio_hi = std::max(bratio_hi, bratio);
      if (ratio < 0.8 || ratio > 1.5)
        return {false, fmt("pattern-SER ratio %.3f at n_a=%d snr=%g", ratio,
                           n_a, grid[i])};
      if (perf.e_s_ant < ser - 3.0 * se)
        return {false, fmt("bound below measurement - 3 SE at n_a=%d snr=%g",
                           n_a, grid[i])};
      if (bratio < 0.8 || bratio > 1.3)
        return {false,
                fmt("BER ratio %.3f at n_a=%d snr=%g", bratio, n_a, grid[i])};
    }
    if (windowed_here < 1)
      return {false, fmt("no windowed point on the n_a=%d curve", n_a)};
  }
  if (windowed < 6)
    return {false, fmt("only %d windowed points across the sweep", windowed)};
  return {true,
          fmt("%d points at 1e6 trials; SER ratio [%.2f, %.2f], BER ratio "
              "[%.2f, %.2f]",
              windowed, ratio_lo, ratio_hi, bratio_lo, bratio_hi)};
}

// ---------------------------------------------------------------------------
// 4. The power split inflates the waveform-branch noise by 1.6 at
//    (rho=0.5, alpha=0.4) versus (rho=0, alpha=1): the waveform SER/BER
//    curves shift right by 10 log10(1.6) = 2.0412 dB, while the pattern
//    error counts at fixed alpha are bit-identical across rho.
Outcome check_split_shift() {
  const double kShift = 2.0412;  // 10 log10(1.6)
  const Constellation qpsk = make_constellation(4);
  const PatternBook book = build_pattern_book(8, 2);
  const int kb = k_eff(book, qpsk);
  const long trials = 600000;
  std::vector<double> grid;
  for (int s = 0; s <= 8; ++s) grid.push_back(s);
  struct Setting {
    double rho, alpha;
  };
  // reference, split, and the split's rho=0 twin for the invariance check
  const Setting settings[3] = {{0.0, 1.0}, {0.5, 0.4}, {0.0, 0.4}};
  std::vector<double> bound[3], cser[3], cber[3];
  std::vector<long> sd_counts[3];
  for (int si = 0; si < 3; ++si) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      SystemConfig cfg{16,
                       8,
                       2,
                       4,
                       settings[si].rho,
                       settings[si].alpha,
                       sigma2_from_snr_b(grid[i], 2, kb),
                       PowerMode::strict};
      const TrialCounters tc = run_trials(cfg, book, qpsk, kCleanModel,
                                          point_seed(5401, 2, i), trials, 1);
      const double ok_trials =
          static_cast<double>(tc.trials - tc.sd_symbol_errors);
      bound[si].push_back(mod_ser_bound(cfg));
      cser[si].push_back(static_cast<double>(tc.mod_errors_sd_correct) /
                         (2.0 * ok_trials));
      cber[si].push_back(static_cast<double>(tc.mod_bit_errors_sd_correct) /
                         (2.0 * 2.0 * ok_trials));
      sd_counts[si].push_back(tc.sd_symbol_errors);
    }
  }
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (sd_counts[1][i] != sd_counts[2][i])
      return {false, fmt("pattern error counts differ across rho at snr=%g "
                         "(%ld vs %ld)",
                         grid[i], sd_counts[1][i], sd_counts[2][i])};
  const double sa = db_crossing(grid, bound[0], 1e-4);
  const double sb = db_crossing(grid, bound[1], 1e-4);
  const double ms = db_crossing(grid, cser[0], 1e-4);
  const double mb = db_crossing(grid, cser[1], 1e-4);
  const double bs = db_crossing(grid, cber[0], 1e-4);
  const double bb = db_crossing(grid, cber[1], 1e-4);
  if (!std::isfinite(sa) || !std::isfinite(sb) || !std::isfinite(ms) ||
      !std::isfinite(mb) || !std::isfinite(bs) || !std::isfinite(bb))
    return {false, "a curve never crosses the 1e-4 level on the grid"};
  const double shift_bound = sb - sa;
  const double shift_ser = mb - ms;
  const double shift_ber = bb - bs;
  if (std::fabs(shift_bound - kShift) > 0.3)
    return {false, fmt("analytic shift %.3f dB", shift_bound)};
  if (std::fabs(shift_ser - kShift) > 0.5)
    return {false, fmt("measured SER shift %.3f dB", shift_ser)};
  if (std::fabs(shift_ber - kShift) > 0.5)
    return {false, fmt("measured BER shift %.3f dB", shift_ber)};
  return {true, fmt("shift %.3f dB analytic, %.3f/%.3f dB measured; pattern "
                    "counts identical across rho",
                    shift_bound, shift_ser, shift_ber)};
}

// ---------------------------------------------------------------------------
// 5. Pattern-bit correction factor: mean Hamming distance from a k-bit word
//    to the other 2^k - 1 words, checked exactly against enumeration.
Outcome check_hamming_correction() {
  if (delta_correction(0) != 0.0) return {false, "k=0 must give 0"};
  for (int k = 1; k <= 12; ++k) {
    unsigned long long total = 0;  // sum of popcounts of all difference words
    for (unsigned v = 1; v < (1u << k); ++v)
      total += static_cast<unsigned long long>(__builtin_popcount(v));
    if (total != static_cast<unsigned long long>(k) << (k - 1))
      return {false, fmt("popcount sum broken at k=%d", k)};
    const double denom = static_cast<double>((1ull << k) - 1ull);
    const double brute = static_cast<double>(total) / denom;
    if (delta_correction(k) != brute)
      return {false, fmt("delta(%d) = %.17g, enumeration gives %.17g", k,
                         delta_correction(k), brute)};
  }
  return {true, "delta(k) = k 2^{k-1}/(2^k - 1) exact for k in [0, 12]"};
}

// ---------------------------------------------------------------------------
// 6. Stream-error referee: with a mid-range pattern error rate, the
//    pattern-confusion mixture formula reproduces the measured per-stream
//    symbol error rate when fed the measured ingredients.
Outcome check_coupled_streams() {
  const Constellation qpsk = make_constellation(4);
  const PatternBook book = build_pattern_book(8, 4);
  const int kb = k_eff(book, qpsk);
  SystemConfig cfg{16, 8, 4, 4, 0.0, 1.0, sigma2_from_snr_b(0.0, 4, kb),
                   PowerMode::strict};
  const long trials = 1500000;
  const TrialCounters tc =
      run_trials(cfg, book, qpsk, kCleanModel, 5601, trials, 1);
  const double e_ant = static_cast<double>(tc.sd_symbol_errors) /
                       static_cast<double>(tc.trials);
  if (e_ant < 0.05 || e_ant > 0.3)
    return {false, fmt("operating point drifted: e_ant = %.4f", e_ant)};
  const double e_mod =
      static_cast<double>(tc.mod_errors_sd_correct) /
      (4.0 * static_cast<double>(tc.trials - tc.sd_symbol_errors));
  const double predicted = mod_ser_coupled(cfg, book, e_ant, e_mod);
  const double observed = static_cast<double>(tc.mod_symbol_errors) /
                          (4.0 * static_cast<double>(tc.trials));
  const double ratio = predicted / observed;
  if (ratio < 0.8 || ratio > 1.25)
    return {false, fmt("mixture/measured = %.3f (e_ant %.3f)", ratio, e_ant)};
  return {true, fmt("mixture/measured = %.3f at e_ant = %.3f", ratio, e_ant)};
}

// ---------------------------------------------------------------------------
// 7. Concentration law of the strict normalization: lambda = beta_s /
//    (n_a sigma2_a0) over 1e5 draws matches the Gamma(n_t - n_r + 1) mean
//    and variance within 1% for n_a in {1, 2, 4}.
Outcome check_normalization_law() {
  const Constellation qpsk = make_constellation(4);
  const double sigma2_a0 = 0.15;  // per-dimension RF-stage noise
  const int shape = 16 - 8 + 1;
  std::string note;
  for (int n_a : {1, 2, 4}) {
    const PatternBook book = build_pattern_book(8, n_a);
    const int kb = k_eff(book, qpsk);
    const double rate = n_a * sigma2_a0;
    const long draws = 100000;
    double m1 = 0.0, m2 = 0.0;
    for (long t = 0; t < draws; ++t) {
      Rng rng(static_cast<std::uint64_t>(9100 + n_a),
              static_cast<std::uint64_t>(t));
      const SuperSymbol s = map_bits(random_bits(kb, rng), book, qpsk);
      CiFactor f;
      draw_invertible(8, 16, rng, f);
      const double lambda = beta_strict(f, s) / rate;
      m1 += lambda;
      m2 += lambda * lambda;
    }
    m1 /= static_cast<double>(draws);
    m2 /= static_cast<double>(draws);
    const double var = m2 - m1 * m1;
    const double mean_err = std::fabs(m1 * rate / shape - 1.0);
    const double var_err = std::fabs(var * rate * rate / shape - 1.0);
    if (mean_err > 0.01 || var_err > 0.01)
      return {false, fmt("n_a=%d: mean off by %.2f%%, variance off by %.2f%%",
                         n_a, 100.0 * mean_err, 100.0 * var_err)};
    note += fmt("%sn_a=%d %.2f%%/%.2f%%", note.empty() ? "" : ", ", n_a,
                100.0 * mean_err, 100.0 * var_err);
  }
  return {true, "mean/variance errors: " + note};
}

// ---------------------------------------------------------------------------
// 8. Pattern-bit information is flat across the splitting ratio and drops
//    when more of the noise budget sits in the RF stage.
Outcome check_sd_flatness() {
  const ChannelModel model = kCleanModel;
  SweepSpec spec;
  spec.kind = SweepKind::rho;
  for (int i = 0; i < 10; ++i) spec.grid.push_back(0.1 * i);
  spec.trials_per_point = 150000;
  spec.seed = 5801;
  const double z = normal_quantile(0.975);
  std::vector<CurveRecord> runs[2];
  const double alphas[2] = {0.4, 0.6};
  for (int a = 0; a < 2; ++a) {
    SystemConfig base{16, 8, 0, 4, 0.0, alphas[a], 1.0, PowerMode::strict};
    runs[a] = sweep_rho(base, model, {4, 6}, 0.0, spec, 1, true, true);
  }
  std::string note;
  for (int n_a : {4, 6}) {
    double mib_by_alpha[2][10];
    double se_max[2] = {0.0, 0.0};
    for (int a = 0; a < 2; ++a) {
      int idx = 0;
      for (const CurveRecord& r : runs[a]) {
        if (r.source != RecordSource::montecarlo || r.n_a != n_a) continue;
        if (idx >= 10) return {false, "unexpected record layout"};
        mib_by_alpha[a][idx] = r.mib;
        const double e = r.e_b_eff;
        if (e <= 0.0 || e >= 0.5)
          return {false, fmt("degenerate SD bit error rate %.4g", e)};
        // delta-method standard error of the per-bit information
        const double se =
            std::log2((1.0 - e) / e) * (r.ci_halfwidth / z);
        se_max[a] = std::max(se_max[a], se);
        ++idx;
      }
      if (idx != 10) return {false, "missing rho grid points"};
      double lo = 1e9, hi = -1e9;
      for (int i = 0; i < 10; ++i) {
        lo = std::min(lo, mib_by_alpha[a][i]);
        hi = std::max(hi, mib_by_alpha[a][i]);
      }
      if (se_max[a] <= 0.0) return {false, "zero standard error"};
      if (hi - lo >= 3.0 * se_max[a])
        return {false, fmt("n_a=%d alpha=%.1f: spread %.3g vs 3 SE %.3g", n_a,
                           alphas[a], hi - lo, 3.0 * se_max[a])};
      if (a == 1) {
        for (int i = 0; i < 10; ++i)
          if (mib_by_alpha[1][i] > mib_by_alpha[0][i])
            return {false,
                    fmt("n_a=%d: alpha=0.6 above alpha=0.4 at rho=%.1f", n_a,
                        0.1 * i)};
        note += fmt("%sn_a=%d flat (spread 0 by shared draws), "
                    "alpha order ok",
                    note.empty() ? "" : "; ", n_a);
      }
    }
  }
  return {true, note};
}

// ---------------------------------------------------------------------------
// 9. Rate orderings, analytic only: at {16,8} and 0 dB the n_a >= 3 schemes
//    beat the conventional benchmark for every splitting ratio; in the
//    large-array limit the conventional rate decreases monotonically with
//    the load ratio and the n_a = 2 / n_a = 1 curves cross near 0.5.
Outcome check_rate_orderings() {
  SweepSpec spec;
  spec.kind = SweepKind::rho;
  for (int i = 0; i < 10; ++i) spec.grid.push_back(0.1 * i);
  spec.trials_per_point = 1000;
  spec.seed = 5901;
  SystemConfig base{16, 8, 0, 4, 0.0, 0.4, 1.0, PowerMode::strict};
  const std::vector<int> n_a_list{3, 4, 5, 6, 8};
  const std::vector<CurveRecord> recs =
      sweep_rho(base, kCleanModel, n_a_list, 0.0, spec, 1, false, false);
  if (recs.size() != n_a_list.size() * spec.grid.size())
    return {false, "unexpected record count from the rho sweep"};
  const auto rate_at = [&](int scheme, int rho_idx) {
    return recs[static_cast<std::size_t>(scheme) * spec.grid.size() +
                static_cast<std::size_t>(rho_idx)]
        .rate;
  };
  for (int i = 0; i < 10; ++i)
    for (int s = 0; s < 4; ++s)
      if (!(rate_at(s, i) > rate_at(4, i)))
        return {false, fmt("n_a=%d not above conventional at rho=%.1f",
                           n_a_list[static_cast<std::size_t>(s)], 0.1 * i)};

  SweepSpec load;
  load.kind = SweepKind::load_ratio;
  load.grid = {0.03125, 0.0625, 0.125,   0.25,    0.375, 0.5,
               0.625,   0.75,   0.875,   0.96875, 0.9990234375};
  load.trials_per_point = 1000;
  load.seed = 5902;
  const std::vector<double> rhos{0.2, 0.4, 0.6, 0.8};
  const std::vector<CurveRecord> far =
      sweep_load_ratio(2048, 4, {1, 2, 0}, rhos, 0.0, 0.4, load);
  const std::size_t n_ratio = load.grid.size();
  if (far.size() != rhos.size() * 3 * n_ratio)
    return {false, "unexpected record count from the load sweep"};
  const auto rec_at = [&](std::size_t rho_idx, std::size_t scheme,
                          std::size_t ratio_idx) -> const CurveRecord& {
    return far[(rho_idx * 3 + scheme) * n_ratio + ratio_idx];
  };
  for (std::size_t r = 0; r < rhos.size(); ++r) {
    for (std::size_t i = 0; i + 1 < n_ratio; ++i)
      if (!(rec_at(r, 2, i).rate > rec_at(r, 2, i + 1).rate))
        return {false, fmt("conventional rate not decreasing at rho=%.1f, "
                           "ratio %.4g",
                           rhos[r], load.grid[i + 1])};
    std::size_t flip = n_ratio;  // first grid interval where the order flips
    for (std::size_t i = 0; i < n_ratio; ++i) {
      const bool two_wins =
          rec_at(r, 1, i).rate > rec_at(r, 0, i).rate;
      if (load.grid[i] <= 0.5 && !two_wins)
        return {false, fmt("n_a=2 below n_a=1 at ratio %.4g, rho=%.1f",
                           load.grid[i], rhos[r])};
      // Past the crossover the reversed order must hold wherever the curves
      // are still resolvable; once both rates sink below a tenth of a bit
      // the binary-error composite carries no ordering information.
      const double scale =
          std::max(rec_at(r, 0, i).rate, rec_at(r, 1, i).rate);
      if (load.grid[i] >= 0.625 && scale >= 0.1 && two_wins)
        return {false, fmt("n_a=2 still above n_a=1 at ratio %.4g, rho=%.1f",
                           load.grid[i], rhos[r])};
      if (i > 0 && flip == n_ratio &&
          rec_at(r, 1, i - 1).rate > rec_at(r, 0, i - 1).rate && !two_wins)
        flip = i;
      if (!(rec_at(r, 0, i).mib > rec_at(r, 2, i).mib) ||
          !(rec_at(r, 1, i).mib > rec_at(r, 2, i).mib))
        return {false, fmt("per-bit information not above conventional at "
                           "ratio %.4g, rho=%.1f",
                           load.grid[i], rhos[r])};
    }
    if (flip == n_ratio)
      return {false, fmt("no n_a=2/1 crossover found at rho=%.1f", rhos[r])};
    if (load.grid[flip - 1] < 0.375 || load.grid[flip] > 0.75)
      return {false,
              fmt("n_a=2/1 crossover in (%.4g, %.4g] at rho=%.1f, expected "
                  "near 0.5",
                  load.grid[flip - 1], load.grid[flip], rhos[r])};
  }
  return {true, "n_a>=3 above conventional on the rho grid; conventional "
                "rate decreasing; n_a=2/1 crossover near 0.5 at every rho"};
}

// ---------------------------------------------------------------------------
// 10. Energy accounting: per transmission the harvested energy equals
//     rho * beta under strict normalization and perfect channel knowledge,
//     and the emitted energy axis is exactly the splitting ratio.
Outcome check_energy_accounting() {
  const Constellation qpsk = make_constellation(4);
  const PatternBook book = build_pattern_book(8, 2);
  const int kb = k_eff(book, qpsk);
  const PowerSplitConfig ps{0.37, 0.5, 0.2, 1.0};
  for (long t = 0; t < 200; ++t) {
    Rng rng(6001, static_cast<std::uint64_t>(t));
    const SuperSymbol s = map_bits(random_bits(kb, rng), book, qpsk);
    CiFactor f;
    const Eigen::MatrixXcd h = draw_invertible(8, 16, rng, f);
    const double beta = beta_strict(f, s);
    const Eigen::VectorXcd x = transmit_with_factor(f, s, beta);
    const double q = harvest(h, x, ps).q_joules;
    if (std::fabs(q - ps.rho * beta) > 1e-10 * std::max(1.0, beta))
      return {false, fmt("trial %ld: q = %.12g but rho beta = %.12g", t, q,
                         ps.rho * beta)};
  }
  SweepSpec spec;
  spec.kind = SweepKind::rho;
  spec.grid = {0.0, 0.3, 0.7, 1.0};
  spec.trials_per_point = 2000;
  spec.seed = 6002;
  SystemConfig base{16, 8, 0, 4, 0.0, 0.5, 1.0, PowerMode::strict};
  const std::vector<CurveRecord> recs =
      sweep_rho(base, kCleanModel, {2}, 0.0, spec, 1, false, true);
  if (recs.size() != 7) return {false, "unexpected record count"};
  for (const CurveRecord& r : recs) {
    if (r.q_normalized != r.x)
      return {false, fmt("energy axis %.12g != rho %.12g", r.q_normalized,
                         r.x)};
  }
  const CurveRecord& full = recs.back();
  if (full.x != 1.0 || full.q_normalized != 1.0 || full.trials != 0 ||
      !std::isnan(full.rate) || full.source != RecordSource::analytic)
    return {false, "rho = 1 must emit a single energy-only record"};
  return {true, "q = rho beta to 1e-10 over 200 trials; energy axis == rho, "
                "rho=1 row energy-only"};
}

// ---------------------------------------------------------------------------
// 11. Impairment robustness: stale transmitter channel knowledge
//     (error variance 0.2) and antenna correlation (0.4 both ends) both run
//     end to end and cost rate at every SNR point.
Outcome check_impairments() {
  const Constellation qpsk = make_constellation(4);
  const PatternBook book = build_pattern_book(8, 4);
  const int kb = k_eff(book, qpsk);
  const ChannelModel stale{16, 8, 0.0, 0.0, 0.2};
  const ChannelModel correlated{16, 8, 0.4, 0.4, 0.0};
  const std::vector<double> grid{-2.0, 0.0, 2.0, 4.0};
  const long trials = 250000;
  double worst_gap_stale = 1e9, worst_gap_corr = 1e9;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    SystemConfig cfg{16, 8,   4, 4, 0.5, 0.4, sigma2_from_snr_b(grid[i], 4,
                                                                kb),
                     PowerMode::strict};
    const auto rate_of = [&](const ChannelModel& model) {
      const TrialCounters tc = run_trials(cfg, book, qpsk, model,
                                          point_seed(6101, 4, i), trials, 1);
      const double ber = static_cast<double>(tc.bit_errors) /
                         (static_cast<double>(tc.trials) * kb);
      return kb * mib(std::min(ber, 0.5));
    };
    const double clean = rate_of(kCleanModel);
    const double with_stale = rate_of(stale);
    const double with_corr = rate_of(correlated);
    if (!(with_stale < clean))
      return {false, fmt("stale channel knowledge does not cost rate at "
                         "snr=%g (%.3f vs %.3f)",
                         grid[i], with_stale, clean)};
    if (!(with_corr < clean))
      return {false, fmt("correlation does not cost rate at snr=%g "
                         "(%.3f vs %.3f)",
                         grid[i], with_corr, clean)};
    worst_gap_stale = std::min(worst_gap_stale, clean - with_stale);
    worst_gap_corr = std::min(worst_gap_corr, clean - with_corr);
  }
  return {true, fmt("rate loss >= %.2f (stale) and %.2f (correlated) bits "
                    "per super-symbol across the grid",
                    worst_gap_stale, worst_gap_corr)};
}

struct Check {
  const char* name;
  Outcome (*fn)();
};

constexpr Check kChecks[] = {
    {"throughput table", check_throughput_table},
    {"split-invariant pattern decisions", check_pattern_invariance},
    {"closed forms vs Monte Carlo over SNR", check_snr_agreement},
    {"waveform shift under the power split", check_split_shift},
    {"pattern-bit Hamming correction", check_hamming_correction},
    {"stream errors under pattern confusion", check_coupled_streams},
    {"normalization concentration law", check_normalization_law},
    {"pattern-bit information flat across the split", check_sd_flatness},
    {"rate orderings at desk and large-array scale", check_rate_orderings},
    {"energy accounting", check_energy_accounting},
    {"impaired channels cost rate", check_impairments},
};

}  // namespace

int main() {
  const std::size_t n = std::size(kChecks);
  bool all = true;
  for (std::size_t i = 0; i < n; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = kChecks[i].fn();
    } catch (const std::exception& e) {
      o = {false, std::string("unexpected exception: ") + e.what()};
    }
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("[%2zu/%zu] %s %7.1fs  %s%s%s\n", i + 1, n,
                o.pass ? "PASS" : "FAIL", dt, kChecks[i].name,
                o.detail.empty() ? "" : ": ", o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  std::printf("%s\n",
              all ? "acceptance: all checks passed" : "acceptance: FAILED");
  return all ? 0 : 1;
}
