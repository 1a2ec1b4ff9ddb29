#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gpsm/config.hpp"
#include "gpsm/harness.hpp"

namespace {

using namespace gpsm;

bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

int run_selftest() {
  std::vector<std::pair<const char*, bool>> checks;
  const Constellation qpsk = make_constellation(4);

  {
    const int expect[] = {5, 8, 11, 14, 15, 16, 16};
    const int streams[] = {1, 2, 3, 4, 5, 6, 8};
    bool ok = true;
    for (int i = 0; i < 7; ++i)
      ok = ok && k_eff(build_pattern_book(8, streams[i]), qpsk) == expect[i];
    checks.emplace_back("throughput table {16,8} qpsk", ok);
  }
  checks.emplace_back(
      "pattern-bit correction factor",
      close(delta_correction(4), 32.0 / 15.0, 1e-12) &&
          delta_correction(1) == 1.0);
  checks.emplace_back("gaussian tail pin",
                      close(gaussian_q(1.2815515655446004), 0.1, 1e-9));
  checks.emplace_back("normal quantile pin",
                      close(normal_quantile(0.975), 1.959963984540054, 1e-9));
  {
    // half-power split with alpha=0.4 equals a clean receiver at 1.6x noise
    const SystemConfig split{16, 8, 2, 4, 0.5, 0.4, 0.2};
    const SystemConfig clean{16, 8, 2, 4, 0.0, 1.0, 0.32};
    checks.emplace_back("waveform bound noise-inflation identity",
                        close(mod_ser_bound(split), mod_ser_bound(clean), 1e-9));
  }
  {
    SystemConfig a{16, 8, 2, 4, 0.0, 1.0, 0.4};
    SystemConfig b = a;
    b.rho = 0.6;
    checks.emplace_back("pattern error rate ignores the power split",
                        spatial_ser(a) == spatial_ser(b));
  }
  {
    const SystemConfig cfg{16, 8, 2, 4, 0.3, 0.5, 0.5};
    const PatternBook book = build_pattern_book(8, 2);
    const ChannelModel model{16, 8, 0.0, 0.0, 0.0};
    const TrialCounters one = run_trials(cfg, book, qpsk, model, 99, 2000, 1);
    const TrialCounters three = run_trials(cfg, book, qpsk, model, 99, 2000, 3);
    checks.emplace_back(
        "worker-count invariance",
        one.sd_symbol_errors == three.sd_symbol_errors &&
            one.bit_errors == three.bit_errors &&
            one.mod_symbol_errors == three.mod_symbol_errors &&
            close(one.harvested_sum, three.harvested_sum, 1e-9));
  }
  {
    bool ok = true;
    const PatternBook book = build_pattern_book(8, 2);
    for (int t = 0; t < 50 && ok; ++t) {
      Rng rng(5, static_cast<std::uint64_t>(t));
      const Eigen::MatrixXcd h = draw_iid_rayleigh(8, 16, rng);
      std::vector<std::uint8_t> bits(
          static_cast<std::size_t>(k_eff(book, qpsk)));
      for (auto& bit : bits) bit = static_cast<std::uint8_t>(rng.word() & 1u);
      const SuperSymbol s = map_bits(bits, book, qpsk);
      const CiFactor f = ci_factor(h);
      const double beta = beta_strict(f, s);
      const Eigen::VectorXcd x = transmit_with_factor(f, s, beta);
      const PowerSplitConfig ps{0.35, 0.5, 0.1, 1.0};
      ok = close(harvest(h, x, ps).q_joules, 0.35 * beta, 1e-9);
    }
    checks.emplace_back("harvested energy equals rho x beta", ok);
  }

  bool all_ok = true;
  for (const auto& [name, ok] : checks) {
    std::cout << "selftest: " << name << ": " << (ok ? "ok" : "FAIL") << "\n";
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Link-level simulator and closed-form toolkit for precoded "
      "spatial modulation with a power-splitting energy-harvesting receiver"};
  app.require_subcommand(1);

  std::string config_path, preset_name, out_path;
  std::uint64_t seed = 0;
  long trials = 0;
  int workers = 0;
  app.add_option("--config", config_path, "key=value configuration file");
  auto* preset_opt = app.add_option("--preset", preset_name,
                                    "built-in configuration (fig2..fig8)");
  app.add_option("--out", out_path, "output CSV path (default: stdout)");
  auto* seed_opt = app.add_option("--seed", seed, "base seed override");
  auto* trials_opt =
      app.add_option("--trials", trials, "trials-per-point override");
  auto* workers_opt =
      app.add_option("--workers", workers, "worker thread count override");

  auto* cmd_analytic =
      app.add_subcommand("analytic", "closed-form curves over an SNR grid");
  auto* cmd_simulate = app.add_subcommand(
      "simulate", "Monte Carlo plus closed-form curves over an SNR grid");
  auto* cmd_tradeoff = app.add_subcommand(
      "tradeoff", "rate-energy trade-off over a splitting-ratio grid");
  auto* cmd_asymptotic = app.add_subcommand(
      "asymptotic", "large-array limit over a load-ratio grid");
  auto* cmd_selftest =
      app.add_subcommand("selftest", "fast invariant checks, exit 0 on pass");
  for (auto* cmd :
       {cmd_analytic, cmd_simulate, cmd_tradeoff, cmd_asymptotic, cmd_selftest})
    cmd->fallthrough();  // global flags may follow the subcommand

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (cmd_selftest->parsed()) return run_selftest();

    gpsm::RunConfig rc;
    if (preset_opt->count() > 0) rc = gpsm::preset(preset_name);
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in)
        throw std::invalid_argument("cannot read config file: " + config_path);
      std::ostringstream buf;
      buf << in.rdbuf();
      gpsm::apply_config_text(rc, buf.str());
    }
    if (seed_opt->count() > 0) rc.seed = seed;
    if (trials_opt->count() > 0) rc.trials = trials;
    if (workers_opt->count() > 0) rc.workers = workers;
    rc.validate();

    std::vector<gpsm::CurveRecord> records;
    if (cmd_analytic->parsed() || cmd_simulate->parsed()) {
      gpsm::SweepSpec spec{gpsm::SweepKind::snr_b, rc.snr_db_list, rc.trials,
                           rc.seed, rc.confidence};
      records = gpsm::sweep_snr(rc.system_base(), rc.channel_model(),
                                rc.resolved_n_a(false), spec, rc.workers,
                                cmd_simulate->parsed());
    } else if (cmd_tradeoff->parsed()) {
      gpsm::SweepSpec spec{gpsm::SweepKind::rho, rc.rho_list, rc.trials,
                           rc.seed, rc.confidence};
      records = gpsm::sweep_rho(rc.system_base(), rc.channel_model(),
                                rc.resolved_n_a(false), rc.snr_b_db, spec,
                                rc.workers, rc.sd_only, true);
    } else if (cmd_asymptotic->parsed()) {
      gpsm::SweepSpec spec{gpsm::SweepKind::load_ratio, rc.ratio_list,
                           rc.trials, rc.seed, rc.confidence};
      records = gpsm::sweep_load_ratio(rc.n_t, rc.m, rc.resolved_n_a(true),
                                       rc.rho_list, rc.snr_b_db, rc.alpha,
                                       spec);
    }

    if (out_path.empty()) {
      gpsm::write_csv(std::cout, records);
    } else {
      std::ofstream out(out_path);
      if (!out)
        throw std::invalid_argument("cannot open output file: " + out_path);
      gpsm::write_csv(out, records);
    }
    return 0;
  } catch (const gpsm::NonConvergence& e) {
    std::cerr << "numeric non-convergence: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
