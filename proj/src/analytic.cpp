#include "gpsm/analytic.hpp"

#include <algorithm>
#include <cmath>

namespace gpsm {

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

// unit-rate Gamma(shape) density through logs
double gamma_unit_pdf(double u, int shape) {
  if (u <= 0.0) return shape == 1 ? (u == 0.0 ? 1.0 : 0.0) : 0.0;
  return std::exp((shape - 1) * std::log(u) - u -
                  std::lgamma(static_cast<double>(shape)));
}

// P(all n_d idle antennas fall below the active one) for a single stream:
// Int_0^inf F(g)^n_d f_nc(g; lambda) dg.  Substituting g = (lambda+2) v
// pins the integrand's bump near v = 1 for every lambda, which keeps the
// window-doubling quadrature reliable far into the high-SNR regime.
double sorting_success_inner(double lambda, int n_d,
                             const QuadratureSpec& spec) {
  if (n_d == 0) return 1.0;
  if (lambda >= 400.0) {
    // deficit bound via the chi-square MGF: E[1 - F^n_d] <= n_d E[e^{-g/2}]
    // = n_d e^{-lambda/4} / 2, which is below double precision here
    return 1.0 - 0.5 * n_d * std::exp(-0.25 * lambda);
  }
  const double scale = lambda + 2.0;
  auto integrand = [&](double v) {
    const double g = scale * v;
    const double f = -std::expm1(-0.5 * g);  // chi2_2 cdf
    if (f <= 0.0) return 0.0;
    const double powed = std::exp(n_d * std::log(f));
    return scale * powed * noncentral_chi2_2_pdf(g, lambda);
  };
  return integrate_semi_infinite(integrand, spec);
}

}  // namespace

void SystemConfig::validate() const {
  if (n_r < 1 || n_a < 1 || n_a > n_r || n_t < n_r)
    throw std::invalid_argument(
        "system config requires n_t >= n_r >= n_a >= 1");
  if (m != 2 && m != 4 && m != 16)
    throw std::invalid_argument("supported modulation orders: 2, 4, 16");
  if (rho < 0.0 || rho > 1.0)
    throw std::invalid_argument("rho must lie in [0,1]");
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("alpha must lie in [0,1]");
  if (!(sigma2 >= 0.0))
    throw std::invalid_argument("sigma2 must be nonnegative");
}

double sigma2_from_snr_b(double snr_b_db, int n_a, int k_eff_bits) {
  if (n_a < 1 || k_eff_bits < 1)
    throw std::invalid_argument("sigma2_from_snr_b: invalid bit budget");
  const double snr = std::pow(10.0, snr_b_db / 10.0);
  return static_cast<double>(n_a) / (snr * k_eff_bits);
}

double spatial_ser(const SystemConfig& cfg) {
  cfg.validate();
  if (cfg.rho >= 1.0)
    throw std::invalid_argument("spatial_ser: rho = 1 has no detection");
  if (cfg.n_a == cfg.n_r) return 0.0;  // single legal pattern
  const double s2a = cfg.sigma2_a();
  if (!(s2a > 0.0))
    throw std::invalid_argument("spatial_ser: RF-stage noise must be positive");

  const int shape = cfg.n_t - cfg.n_r + 1;
  const int n_d = cfg.n_r - cfg.n_a;
  const double rate = 0.5 * cfg.n_a * s2a;

  QuadratureSpec inner_spec;
  inner_spec.rel_tolerance = 1e-10;
  QuadratureSpec outer_spec;
  outer_spec.rel_tolerance = 1e-9;

  // outer average over the concentration law, rescaled to unit rate so the
  // Gamma mass always sits near u = shape
  auto outer = [&](double u) {
    const double lambda = u / rate;
    const double inner = sorting_success_inner(lambda, n_d, inner_spec);
    const double powed =
        inner <= 0.0 ? 0.0 : std::exp(cfg.n_a * std::log(inner));
    return powed * gamma_unit_pdf(u, shape);
  };
  const double success = integrate_semi_infinite(outer, outer_spec);
  return clamp01(1.0 - success);
}

double kappa(const SystemConfig& cfg) {
  cfg.validate();
  if (cfg.rho >= 1.0) throw std::invalid_argument("kappa: rho = 1 rejected");
  const double s2a = cfg.sigma2_a();
  if (!(s2a > 0.0))
    throw std::invalid_argument("kappa: RF-stage noise must be positive");
  return 2.0 * (s2a + cfg.sigma2_b() / (1.0 - cfg.rho)) / s2a;
}

double mod_ser_bound(const SystemConfig& cfg) {
  cfg.validate();
  if (cfg.rho >= 1.0)
    throw std::invalid_argument("mod_ser_bound: rho = 1 has no detection");
  const Constellation c = make_constellation(cfg.m);
  const int shape = cfg.n_t - cfg.n_r + 1;
  const double s2a = cfg.sigma2_a();
  if (!(s2a > 0.0))
    throw std::invalid_argument(
        "mod_ser_bound: RF-stage noise must be positive");
  // gamma ~ Gamma(shape, kappa * n_a * sigma_a^2 / 2); substitute to unit
  // rate and integrate the Q kernel against it
  const double rate_gamma = kappa(cfg) * 0.5 * cfg.n_a * s2a;
  QuadratureSpec spec;
  auto integrand = [&](double u) {
    const double gamma = u / rate_gamma;
    return gaussian_q(c.d_min * std::sqrt(0.5 * gamma)) *
           gamma_unit_pdf(u, shape);
  };
  return std::min(1.0, c.n_min * integrate_semi_infinite(integrand, spec));
}

int common_antennas(const std::vector<int>& pat_a,
                    const std::vector<int>& pat_b) {
  if (pat_a.size() != pat_b.size())
    throw std::invalid_argument("common_antennas: pattern sizes differ");
  // patterns are sorted; two-pointer walk
  int n_c = 0;
  std::size_t i = 0, j = 0;
  while (i < pat_a.size() && j < pat_b.size()) {
    if (pat_a[i] == pat_b[j]) {
      ++n_c;
      ++i;
      ++j;
    } else if (pat_a[i] < pat_b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return n_c;
}

double mod_ser_coupled(const SystemConfig& cfg, const PatternBook& book,
                       double e_s_ant, double e_s_mod) {
  if (e_s_ant < 0.0 || e_s_ant > 1.0 || e_s_mod < 0.0 || e_s_mod > 1.0)
    throw std::invalid_argument("mod_ser_coupled: probabilities required");
  if (book.k_ant == 0) return e_s_mod;
  const Constellation c = make_constellation(cfg.m);
  const std::size_t n_sel = book.selected.size();
  // The wrong-pattern contribution [N_c e_mod + N_d e_o]/n_a depends only on
  // the distance N_d between the true and the detected pattern. The sorting
  // detector lands on a minimum-distance neighbour almost surely (each extra
  // differing antenna needs another independent noise-over-signal event), so
  // the mixture averages B over each true pattern's nearest neighbours
  // instead of over every wrong pattern in the book.
  double cross = 0.0;
  for (std::size_t k = 0; k < n_sel; ++k) {
    int d_min = book.n_a;
    for (std::size_t l = 0; l < n_sel && d_min > 1; ++l) {
      if (l == k) continue;
      const int d =
          book.n_a - common_antennas(book.selected[k], book.selected[l]);
      if (d < d_min) d_min = d;
    }
    cross += ((book.n_a - d_min) * e_s_mod + d_min * c.e_s_o) / book.n_a;
  }
  const double wrong_avg = cross / static_cast<double>(n_sel);
  return clamp01((1.0 - e_s_ant) * e_s_mod + e_s_ant * wrong_avg);
}

double delta_correction(int k_ant) {
  if (k_ant < 0) throw std::invalid_argument("delta_correction: k >= 0");
  if (k_ant == 0) return 0.0;
  if (k_ant <= 62) {
    // exact rational k 2^{k-1} / (2^k - 1)
    const double num = static_cast<double>(k_ant) *
                       static_cast<double>(1ull << (k_ant - 1));
    const double den = static_cast<double>((1ull << k_ant) - 1ull);
    return num / den;
  }
  return k_ant * 0.5;  // limit of k 2^{k-1}/(2^k - 1) for large k
}

double overall_ber(const SystemConfig& cfg, const PatternBook& book,
                   double e_s_ant, double e_s_mod_coupled) {
  const Constellation c = make_constellation(cfg.m);
  const int k = k_eff(book, c);
  const double bits_wrong = delta_correction(book.k_ant) * e_s_ant +
                            book.n_a * e_s_mod_coupled;
  return clamp01(bits_wrong / k);
}

double mib(double e_b_eff) {
  if (e_b_eff < 0.0 || e_b_eff > 1.0)
    throw std::invalid_argument("mib: probability required");
  auto xlog2x = [](double p) {
    return p > 0.0 ? p * std::log2(p) : 0.0;
  };
  return 1.0 + xlog2x(e_b_eff) + xlog2x(1.0 - e_b_eff);
}

double dcmc_rate(const SystemConfig& cfg, const PatternBook& book,
                 double mib_value) {
  const Constellation c = make_constellation(cfg.m);
  return k_eff(book, c) * mib_value;
}

LinkPerformance analytic_performance(const SystemConfig& cfg,
                                     const PatternBook& book) {
  LinkPerformance perf;
  perf.e_s_ant = spatial_ser(cfg);
  perf.e_s_mod = mod_ser_bound(cfg);
  perf.e_s_mod_coupled =
      mod_ser_coupled(cfg, book, perf.e_s_ant, perf.e_s_mod);
  perf.e_b_eff = overall_ber(cfg, book, perf.e_s_ant, perf.e_s_mod_coupled);
  perf.mib = mib(perf.e_b_eff);
  perf.rate = dcmc_rate(cfg, book, perf.mib);
  perf.q_normalized = cfg.rho;
  return perf;
}

LinkPerformance asymptotic_point(const SystemConfig& cfg) {
  cfg.validate();
  if (cfg.n_r >= cfg.n_t)
    throw std::invalid_argument(
        "asymptotic_point: requires n_r/n_t strictly below 1");
  if (cfg.rho >= 1.0)
    throw std::invalid_argument("asymptotic_point: rho = 1 has no detection");
  const Constellation c = make_constellation(cfg.m);
  const int k_ant = k_ant_bits(cfg.n_r, cfg.n_a);
  const int k = k_ant + cfg.n_a * c.k_mod;

  const double beta_limit =
      static_cast<double>(cfg.n_t) / cfg.n_r - 1.0;  // relaxed-normalization
  const double s2a = cfg.sigma2_a();
  if (!(s2a > 0.0))
    throw std::invalid_argument(
        "asymptotic_point: RF-stage noise must be positive");
  const double lambda_d = beta_limit / (cfg.n_a * 0.5 * s2a);
  const double gamma_d =
      beta_limit / (cfg.n_a * (s2a + cfg.sigma2_b() / (1.0 - cfg.rho)));

  QuadratureSpec spec;
  spec.rel_tolerance = 1e-10;
  const double e_ant =
      clamp01(1.0 - sorting_success_inner(lambda_d, cfg.n_r - cfg.n_a, spec));
  const double e_mod =
      std::min(1.0, c.n_min * gaussian_q(c.d_min * std::sqrt(0.5 * gamma_d)));

  LinkPerformance perf;
  perf.e_s_ant = e_ant;
  perf.e_s_mod = e_mod;
  perf.e_s_mod_coupled = e_mod;  // pattern errors assumed rare in the limit
  perf.e_b_eff = clamp01(
      (delta_correction(k_ant) * e_ant + cfg.n_a * e_mod) / k);
  perf.mib = mib(perf.e_b_eff);
  perf.rate = k * perf.mib;
  perf.q_normalized = cfg.rho;
  return perf;
}

}  // namespace gpsm
