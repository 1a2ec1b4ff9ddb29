#include "gpsm/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace gpsm {

void SweepSpec::validate() const {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("sweep grid must be strictly increasing");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw std::invalid_argument("confidence must lie in (0, 1)");
  if (trials_per_point < 1)
    throw std::invalid_argument("trials_per_point must be positive");
}

TrialCounters& TrialCounters::operator+=(const TrialCounters& o) {
  trials += o.trials;
  sd_symbol_errors += o.sd_symbol_errors;
  mod_symbol_errors += o.mod_symbol_errors;
  bit_errors += o.bit_errors;
  harvested_sum += o.harvested_sum;
  regenerated_channels += o.regenerated_channels;
  sd_bit_errors += o.sd_bit_errors;
  mod_errors_sd_correct += o.mod_errors_sd_correct;
  mod_bit_errors_sd_correct += o.mod_bit_errors_sd_correct;
  return *this;
}

namespace {

double phi_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

constexpr double kSqrt2Pi = 2.5066282746310005024;

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("quantile argument must lie in (0, 1)");
  // rational approximation (relative error ~1e-9), then two Halley updates
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
          c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  for (int i = 0; i < 2; ++i) {
    const double e = phi_cdf(x) - p;
    const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double wilson_halfwidth(long errors, long n, double confidence) {
  if (n <= 0) throw std::invalid_argument("interval needs at least one trial");
  if (errors < 0 || errors > n)
    throw std::invalid_argument("error count out of range");
  const double z = normal_quantile(0.5 + 0.5 * confidence);
  const double nn = static_cast<double>(n);
  const double ph = static_cast<double>(errors) / nn;
  const double z2 = z * z;
  return z * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn)) /
         (1.0 + z2 / nn);
}

std::uint64_t point_seed(std::uint64_t base_seed, int n_a,
                         std::size_t grid_index) {
  const std::uint64_t stream =
      (static_cast<std::uint64_t>(static_cast<std::uint32_t>(n_a)) << 32) |
      static_cast<std::uint32_t>(grid_index);
  return Rng(base_seed, stream).word();
}

int count_stream_errors(const PatternBook& book, const Constellation& c,
                        const SuperSymbol& sent, const DetectionResult& det) {
  const std::vector<int>& pk = book.selected[sent.pattern_index];
  const std::vector<int>& ph = book.selected[det.k_hat];
  int errors = 0;
  std::vector<int> lost, spurious;
  for (std::size_t j = 0; j < pk.size(); ++j) {
    const auto it = std::lower_bound(ph.begin(), ph.end(), pk[j]);
    if (it != ph.end() && *it == pk[j]) {
      const int p = static_cast<int>(it - ph.begin());
      if (c.points[static_cast<std::size_t>(det.m_hat[p])] !=
          sent.modulated(static_cast<Eigen::Index>(j)))
        ++errors;
    } else {
      lost.push_back(static_cast<int>(j));
    }
  }
  for (std::size_t p = 0; p < ph.size(); ++p) {
    const auto it = std::lower_bound(pk.begin(), pk.end(), ph[p]);
    if (it == pk.end() || *it != ph[p]) spurious.push_back(static_cast<int>(p));
  }
  for (std::size_t i = 0; i < lost.size(); ++i)
    if (c.points[static_cast<std::size_t>(det.m_hat[spurious[i]])] !=
        sent.modulated(lost[i]))
      ++errors;
  return errors;
}

TrialCounters run_trial(const SystemConfig& cfg, const PatternBook& book,
                        const Constellation& c, const ChannelModel& model,
                        Rng& rng, const KroneckerCache* cache) {
  if (cfg.rho >= 1.0)
    throw std::invalid_argument(
        "rho = 1 leaves no baseband signal; energy-only points skip detection");
  TrialCounters tc;
  const int kb = k_eff(book, c);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(kb));
  for (auto& bit : bits) bit = static_cast<std::uint8_t>(rng.word() & 1u);
  const SuperSymbol s = map_bits(bits, book, c);

  ChannelRealization ch;
  CiFactor f;
  for (int attempt = 0;;) {
    ch = draw_realization(model, rng, cache);
    try {
      f = ci_factor(ch.h_known);
      break;
    } catch (const SingularChannel&) {
      ++tc.regenerated_channels;
      if (++attempt > 256) throw;
    }
  }

  const double beta =
      cfg.mode == PowerMode::strict ? beta_strict(f, s) : beta_relaxed(f);
  const Eigen::VectorXcd x = transmit_with_factor(f, s, beta);
  const PowerSplitConfig ps{cfg.rho, cfg.alpha, cfg.sigma2, 1.0};
  const ReceivedSignals y = receive(x, ch.h_true, ps, rng);
  tc.harvested_sum += harvest(ch.h_true, x, ps).q_joules;

  DetectionResult det;
  det.k_hat = detect_pattern(y, book);
  det.m_hat = detect_symbols(y, det.k_hat, book, c, beta, ps);
  det.bits_hat = demap(det.k_hat, det.m_hat, book, c);
  det.sd_correct = det.k_hat == s.pattern_index;
  det.mod_errors = count_stream_errors(book, c, s, det);

  tc.trials = 1;
  tc.sd_symbol_errors = det.sd_correct ? 0 : 1;
  tc.mod_symbol_errors = det.mod_errors;
  if (det.sd_correct) tc.mod_errors_sd_correct = det.mod_errors;
  for (int i = 0; i < kb; ++i)
    if (det.bits_hat[static_cast<std::size_t>(i)] !=
        bits[static_cast<std::size_t>(i)]) {
      ++tc.bit_errors;
      if (i < book.k_ant) ++tc.sd_bit_errors;
    }
  // a correct pattern decision reproduces the pattern bits exactly, so any
  // remaining mismatches sit in the modulated bits
  if (det.sd_correct) tc.mod_bit_errors_sd_correct = tc.bit_errors;
  return tc;
}

TrialCounters run_trials(const SystemConfig& cfg, const PatternBook& book,
                         const Constellation& c, const ChannelModel& model,
                         std::uint64_t seed, long trials, int workers) {
  cfg.validate();
  model.validate();
  if (trials < 0) throw std::invalid_argument("negative trial count");
  if (trials == 0) return {};
  const KroneckerCache cache = make_kronecker_cache(model);
  const int n_workers =
      static_cast<int>(std::clamp<long>(workers, 1, trials));

  auto run_range = [&](long first, long last, TrialCounters& out) {
    TrialCounters local;
    for (long t = first; t < last; ++t) {
      Rng rng(seed, static_cast<std::uint64_t>(t));
      local += run_trial(cfg, book, c, model, rng, &cache);
    }
    out = local;
  };

  if (n_workers == 1) {
    TrialCounters total;
    run_range(0, trials, total);
    return total;
  }

  std::vector<TrialCounters> parts(static_cast<std::size_t>(n_workers));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_workers));
  std::vector<std::thread> pool;
  const long base = trials / n_workers, rem = trials % n_workers;
  long first = 0;
  for (int w = 0; w < n_workers; ++w) {
    const long count = base + (w < rem ? 1 : 0);
    const long last = first + count;
    pool.emplace_back([&, w, first, last] {
      try {
        run_range(first, last, parts[static_cast<std::size_t>(w)]);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
    first = last;
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  TrialCounters total;
  for (const auto& part : parts) total += part;
  return total;
}

namespace {

CurveRecord analytic_record(double x, int n_a, double rho,
                            const LinkPerformance& p) {
  CurveRecord r;
  r.x = x;
  r.source = RecordSource::analytic;
  r.n_a = n_a;
  r.e_s_ant = p.e_s_ant;
  r.e_b_eff = p.e_b_eff;
  r.mib = p.mib;
  r.rate = p.rate;
  r.q_normalized = rho;
  return r;
}

CurveRecord mc_record(double x, int n_a, const PatternBook& book, int kb,
                      const TrialCounters& tc, double rho, double confidence,
                      bool sd_only) {
  CurveRecord r;
  r.x = x;
  r.source = RecordSource::montecarlo;
  r.n_a = n_a;
  r.q_normalized = rho;
  r.trials = tc.trials;
  r.e_s_ant =
      tc.trials > 0 ? static_cast<double>(tc.sd_symbol_errors) / tc.trials
                    : 0.0;
  const int bits_per_trial = sd_only ? book.k_ant : kb;
  const long n_bits = tc.trials * bits_per_trial;
  const long n_err = sd_only ? tc.sd_bit_errors : tc.bit_errors;
  if (n_bits > 0) {
    r.e_b_eff = static_cast<double>(n_err) / n_bits;
    r.mib = mib(r.e_b_eff);
    r.rate = bits_per_trial * r.mib;
    r.ci_halfwidth = wilson_halfwidth(n_err, n_bits, confidence);
  }
  return r;
}

void check_n_a(int n_a, int n_r) {
  if (n_a < 1 || n_a > n_r)
    throw std::invalid_argument("stream count must lie in [1, n_r]");
}

}  // namespace

std::vector<CurveRecord> sweep_snr(const SystemConfig& base,
                                   const ChannelModel& model,
                                   const std::vector<int>& n_a_list,
                                   const SweepSpec& spec, int workers,
                                   bool with_montecarlo) {
  if (spec.kind != SweepKind::snr_b)
    throw std::invalid_argument("sweep kind mismatch: expected snr_b");
  spec.validate();
  if (with_montecarlo && spec.trials_per_point < 1000)
    throw std::invalid_argument("Monte Carlo sweeps need >= 1000 trials");
  const Constellation c = make_constellation(base.m);
  std::vector<CurveRecord> out;
  for (int n_a : n_a_list) {
    check_n_a(n_a, base.n_r);
    const PatternBook book = build_pattern_book(base.n_r, n_a);
    const int kb = k_eff(book, c);
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
      SystemConfig cfg = base;
      cfg.n_a = n_a;
      cfg.sigma2 = sigma2_from_snr_b(spec.grid[i], n_a, kb);
      out.push_back(analytic_record(spec.grid[i], n_a, cfg.rho,
                                    analytic_performance(cfg, book)));
      if (with_montecarlo) {
        const TrialCounters tc =
            run_trials(cfg, book, c, model, point_seed(spec.seed, n_a, i),
                       spec.trials_per_point, workers);
        out.push_back(mc_record(spec.grid[i], n_a, book, kb, tc, cfg.rho,
                                spec.confidence, false));
      }
    }
  }
  return out;
}

std::vector<CurveRecord> sweep_rho(const SystemConfig& base,
                                   const ChannelModel& model,
                                   const std::vector<int>& n_a_list,
                                   double snr_b_db, const SweepSpec& spec,
                                   int workers, bool sd_only,
                                   bool with_montecarlo) {
  if (spec.kind != SweepKind::rho)
    throw std::invalid_argument("sweep kind mismatch: expected rho");
  spec.validate();
  if (with_montecarlo && spec.trials_per_point < 1000)
    throw std::invalid_argument("Monte Carlo sweeps need >= 1000 trials");
  if (!spec.grid.empty() &&
      (spec.grid.front() < 0.0 || spec.grid.back() > 1.0))
    throw std::invalid_argument("splitting-ratio grid must lie in [0, 1]");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const Constellation c = make_constellation(base.m);
  std::vector<CurveRecord> out;
  for (int n_a : n_a_list) {
    check_n_a(n_a, base.n_r);
    const PatternBook book = build_pattern_book(base.n_r, n_a);
    if (sd_only && book.k_ant == 0)
      throw std::invalid_argument(
          "sd_only needs pattern bits; the conventional benchmark has none");
    const int kb = k_eff(book, c);
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
      const double rho = spec.grid[i];
      if (rho == 1.0) {
        CurveRecord r;
        r.x = 1.0;
        r.n_a = n_a;
        r.e_s_ant = r.e_b_eff = r.mib = r.rate = nan;
        r.q_normalized = 1.0;
        out.push_back(r);
        continue;
      }
      SystemConfig cfg = base;
      cfg.n_a = n_a;
      cfg.rho = rho;
      cfg.sigma2 = sigma2_from_snr_b(snr_b_db, n_a, kb);
      const LinkPerformance perf = analytic_performance(cfg, book);
      if (sd_only) {
        CurveRecord r;
        r.x = rho;
        r.n_a = n_a;
        r.e_s_ant = perf.e_s_ant;
        r.e_b_eff = delta_correction(book.k_ant) * perf.e_s_ant / book.k_ant;
        r.mib = mib(r.e_b_eff);
        r.rate = book.k_ant * r.mib;
        r.q_normalized = rho;
        out.push_back(r);
      } else {
        out.push_back(analytic_record(rho, n_a, rho, perf));
      }
      if (with_montecarlo) {
        // Every rho point reuses the same substream: the splitting ratio is
        // the quantity under study, so holding the draws fixed makes the
        // pattern-domain metrics exactly flat across rho instead of flat up
        // to resampling noise.
        const TrialCounters tc =
            run_trials(cfg, book, c, model, point_seed(spec.seed, n_a, 0),
                       spec.trials_per_point, workers);
        out.push_back(mc_record(rho, n_a, book, kb, tc, rho, spec.confidence,
                                sd_only));
      }
    }
  }
  return out;
}

std::vector<CurveRecord> sweep_load_ratio(int n_t, int m,
                                          const std::vector<int>& n_a_list,
                                          const std::vector<double>& rho_list,
                                          double snr_b_db, double alpha,
                                          const SweepSpec& spec) {
  if (spec.kind != SweepKind::load_ratio)
    throw std::invalid_argument("sweep kind mismatch: expected load_ratio");
  spec.validate();
  if (!spec.grid.empty() &&
      (spec.grid.front() <= 0.0 || spec.grid.back() >= 1.0))
    throw std::invalid_argument("load-ratio grid must lie inside (0, 1)");
  const Constellation c = make_constellation(m);
  std::vector<CurveRecord> out;
  for (double rho : rho_list) {
    for (int n_a_req : n_a_list) {
      if (n_a_req < 0)
        throw std::invalid_argument(
            "stream count must be positive (0 = conventional)");
      for (double ratio : spec.grid) {
        const int n_r = static_cast<int>(std::lround(ratio * n_t));
        if (n_r < 1 || n_r >= n_t)
          throw std::invalid_argument("ratio grid must keep 1 <= n_r < n_t");
        const int n_a = n_a_req == 0 ? n_r : n_a_req;
        if (n_a > n_r)
          throw std::invalid_argument("stream count exceeds n_r on the grid");
        const int kb = k_ant_bits(n_r, n_a) + n_a * c.k_mod;
        SystemConfig cfg;
        cfg.n_t = n_t;
        cfg.n_r = n_r;
        cfg.n_a = n_a;
        cfg.m = m;
        cfg.rho = rho;
        cfg.alpha = alpha;
        cfg.sigma2 = sigma2_from_snr_b(snr_b_db, n_a, kb);
        out.push_back(analytic_record(ratio, n_a, rho, asymptotic_point(cfg)));
      }
    }
  }
  return out;
}

void write_csv(std::ostream& os, const std::vector<CurveRecord>& records) {
  os << "# gpsm-csv v1\n";
  os << "# energy axis: q_norm is the harvested fraction rho, i.e. q "
        "normalized to its rho=1 value\n";
  os << "sweep_x,source,n_a,e_s_ant,e_b_eff,mib,rate,q_norm,ci_halfwidth,"
        "trials\n";
  char buf[320];
  for (const CurveRecord& r : records) {
    std::snprintf(buf, sizeof buf,
                  "%.10g,%s,%d,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%ld\n",
                  r.x,
                  r.source == RecordSource::analytic ? "analytic"
                                                     : "montecarlo",
                  r.n_a, r.e_s_ant, r.e_b_eff, r.mib, r.rate, r.q_normalized,
                  r.ci_halfwidth, r.trials);
    os << buf;
  }
}

}  // namespace gpsm
