// Python bindings for the link-level engine: the analytic pipeline, the
// Monte-Carlo trial runner, the three sweep drivers, and the configuration
// layer.  Vector-valued channel internals stay on the C++ side; the module
// exposes the operations a plotting or calibration script needs.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gpsm/config.hpp"
#include "gpsm/harness.hpp"

namespace py = pybind11;
using namespace gpsm;

namespace {

std::string records_to_csv(const std::vector<CurveRecord>& records) {
  std::ostringstream os;
  write_csv(os, records);
  return os.str();
}

TrialCounters simulate(const SystemConfig& cfg, const ChannelModel& model,
                       std::uint64_t seed, long trials, int workers) {
  const Constellation c = make_constellation(cfg.m);
  const PatternBook book = build_pattern_book(cfg.n_r, cfg.n_a);
  return run_trials(cfg, book, c, model, seed, trials, workers);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Link-level engine for precoded spatial modulation with a power-split "
      "receiver: closed-form error rates, Monte-Carlo simulation, and "
      "rate-energy sweeps.";

  py::enum_<PowerMode>(m, "PowerMode")
      .value("strict", PowerMode::strict)
      .value("relaxed", PowerMode::relaxed);

  py::enum_<SweepKind>(m, "SweepKind")
      .value("snr_b", SweepKind::snr_b)
      .value("rho", SweepKind::rho)
      .value("load_ratio", SweepKind::load_ratio);

  py::enum_<RecordSource>(m, "RecordSource")
      .value("analytic", RecordSource::analytic)
      .value("montecarlo", RecordSource::montecarlo);

  py::class_<SystemConfig>(m, "SystemConfig")
      .def(py::init([](int n_t, int n_r, int n_a, int mod, double rho,
                       double alpha, double sigma2, PowerMode mode) {
             SystemConfig cfg{n_t, n_r, n_a, mod, rho, alpha, sigma2, mode};
             cfg.validate();
             return cfg;
           }),
           py::arg("n_t"), py::arg("n_r"), py::arg("n_a"), py::arg("m") = 4,
           py::arg("rho") = 0.0, py::arg("alpha") = 1.0,
           py::arg("sigma2") = 1.0, py::arg("mode") = PowerMode::strict)
      .def_readwrite("n_t", &SystemConfig::n_t)
      .def_readwrite("n_r", &SystemConfig::n_r)
      .def_readwrite("n_a", &SystemConfig::n_a)
      .def_readwrite("m", &SystemConfig::m)
      .def_readwrite("rho", &SystemConfig::rho)
      .def_readwrite("alpha", &SystemConfig::alpha)
      .def_readwrite("sigma2", &SystemConfig::sigma2)
      .def_readwrite("mode", &SystemConfig::mode)
      .def("validate", &SystemConfig::validate)
      .def("sigma2_a", &SystemConfig::sigma2_a)
      .def("sigma2_b", &SystemConfig::sigma2_b);

  py::class_<ChannelModel>(m, "ChannelModel")
      .def(py::init([](int n_t, int n_r, double rho_t, double rho_r,
                       double sigma2_e) {
             ChannelModel model{n_t, n_r, rho_t, rho_r, sigma2_e};
             model.validate();
             return model;
           }),
           py::arg("n_t"), py::arg("n_r"), py::arg("rho_t") = 0.0,
           py::arg("rho_r") = 0.0, py::arg("sigma2_e") = 0.0)
      .def_readwrite("n_t", &ChannelModel::n_t)
      .def_readwrite("n_r", &ChannelModel::n_r)
      .def_readwrite("rho_t", &ChannelModel::rho_t)
      .def_readwrite("rho_r", &ChannelModel::rho_r)
      .def_readwrite("sigma2_e", &ChannelModel::sigma2_e)
      .def("correlated", &ChannelModel::correlated);

  py::class_<PatternBook>(m, "PatternBook")
      .def_readonly("n_r", &PatternBook::n_r)
      .def_readonly("n_a", &PatternBook::n_a)
      .def_readonly("k_ant", &PatternBook::k_ant)
      .def_readonly("selected", &PatternBook::selected);

  py::class_<Constellation>(m, "Constellation")
      .def_readonly("m", &Constellation::m)
      .def_readonly("k_mod", &Constellation::k_mod)
      .def_readonly("points", &Constellation::points)
      .def_readonly("d_min", &Constellation::d_min)
      .def_readonly("n_min", &Constellation::n_min)
      .def_readonly("e_s_o", &Constellation::e_s_o);

  py::class_<LinkPerformance>(m, "LinkPerformance")
      .def_readonly("e_s_ant", &LinkPerformance::e_s_ant)
      .def_readonly("e_s_mod", &LinkPerformance::e_s_mod)
      .def_readonly("e_s_mod_coupled", &LinkPerformance::e_s_mod_coupled)
      .def_readonly("e_b_eff", &LinkPerformance::e_b_eff)
      .def_readonly("mib", &LinkPerformance::mib)
      .def_readonly("rate", &LinkPerformance::rate)
      .def_readonly("q_normalized", &LinkPerformance::q_normalized);

  py::class_<TrialCounters>(m, "TrialCounters")
      .def_readonly("trials", &TrialCounters::trials)
      .def_readonly("sd_symbol_errors", &TrialCounters::sd_symbol_errors)
      .def_readonly("mod_symbol_errors", &TrialCounters::mod_symbol_errors)
      .def_readonly("bit_errors", &TrialCounters::bit_errors)
      .def_readonly("harvested_sum", &TrialCounters::harvested_sum)
      .def_readonly("regenerated_channels",
                    &TrialCounters::regenerated_channels)
      .def_readonly("sd_bit_errors", &TrialCounters::sd_bit_errors)
      .def_readonly("mod_errors_sd_correct",
                    &TrialCounters::mod_errors_sd_correct)
      .def_readonly("mod_bit_errors_sd_correct",
                    &TrialCounters::mod_bit_errors_sd_correct);

  py::class_<SweepSpec>(m, "SweepSpec")
      .def(py::init([](SweepKind kind, std::vector<double> grid, long trials,
                       std::uint64_t seed, double confidence) {
             SweepSpec spec{kind, std::move(grid), trials, seed, confidence};
             spec.validate();
             return spec;
           }),
           py::arg("kind"), py::arg("grid"),
           py::arg("trials_per_point") = 10000, py::arg("seed") = 1,
           py::arg("confidence") = 0.95)
      .def_readwrite("kind", &SweepSpec::kind)
      .def_readwrite("grid", &SweepSpec::grid)
      .def_readwrite("trials_per_point", &SweepSpec::trials_per_point)
      .def_readwrite("seed", &SweepSpec::seed)
      .def_readwrite("confidence", &SweepSpec::confidence);

  py::class_<CurveRecord>(m, "CurveRecord")
      .def_readonly("x", &CurveRecord::x)
      .def_readonly("source", &CurveRecord::source)
      .def_readonly("n_a", &CurveRecord::n_a)
      .def_readonly("e_s_ant", &CurveRecord::e_s_ant)
      .def_readonly("e_b_eff", &CurveRecord::e_b_eff)
      .def_readonly("mib", &CurveRecord::mib)
      .def_readonly("rate", &CurveRecord::rate)
      .def_readonly("q_normalized", &CurveRecord::q_normalized)
      .def_readonly("ci_halfwidth", &CurveRecord::ci_halfwidth)
      .def_readonly("trials", &CurveRecord::trials)
      .def("__repr__", [](const CurveRecord& r) {
        std::ostringstream os;
        os << "CurveRecord(x=" << r.x << ", source="
           << (r.source == RecordSource::analytic ? "analytic" : "montecarlo")
           << ", n_a=" << r.n_a << ", rate=" << r.rate << ")";
        return os.str();
      });

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("n_t", &RunConfig::n_t)
      .def_readwrite("n_r", &RunConfig::n_r)
      .def_readwrite("n_a_list", &RunConfig::n_a_list)
      .def_readwrite("m", &RunConfig::m)
      .def_readwrite("rho", &RunConfig::rho)
      .def_readwrite("alpha", &RunConfig::alpha)
      .def_readwrite("snr_b_db", &RunConfig::snr_b_db)
      .def_readwrite("snr_db_list", &RunConfig::snr_db_list)
      .def_readwrite("rho_list", &RunConfig::rho_list)
      .def_readwrite("ratio_list", &RunConfig::ratio_list)
      .def_readwrite("trials", &RunConfig::trials)
      .def_readwrite("seed", &RunConfig::seed)
      .def_readwrite("workers", &RunConfig::workers)
      .def_readwrite("confidence", &RunConfig::confidence)
      .def_readwrite("sd_only", &RunConfig::sd_only)
      .def_readwrite("mode", &RunConfig::mode)
      .def_readwrite("sigma2_e", &RunConfig::sigma2_e)
      .def_readwrite("rho_t", &RunConfig::rho_t)
      .def_readwrite("rho_r", &RunConfig::rho_r)
      .def("validate", &RunConfig::validate)
      .def("channel_model", &RunConfig::channel_model)
      .def("resolved_n_a", &RunConfig::resolved_n_a,
           py::arg("per_point_conventional") = false);

  m.def("build_pattern_book", &build_pattern_book, py::arg("n_r"),
        py::arg("n_a"));
  m.def("make_constellation", &make_constellation, py::arg("m"));
  m.def("k_eff", &k_eff, py::arg("book"), py::arg("constellation"));
  m.def("pattern_count", &pattern_count, py::arg("n"), py::arg("k"));
  m.def("k_ant_bits", &k_ant_bits, py::arg("n_r"), py::arg("n_a"));

  m.def("sigma2_from_snr_b", &sigma2_from_snr_b, py::arg("snr_b_db"),
        py::arg("n_a"), py::arg("k_eff_bits"));
  m.def("spatial_ser", &spatial_ser, py::arg("cfg"));
  m.def("kappa", &kappa, py::arg("cfg"));
  m.def("mod_ser_bound", &mod_ser_bound, py::arg("cfg"));
  m.def("mod_ser_coupled", &mod_ser_coupled, py::arg("cfg"), py::arg("book"),
        py::arg("e_s_ant"), py::arg("e_s_mod"));
  m.def("delta_correction", &delta_correction, py::arg("k_ant"));
  m.def("overall_ber", &overall_ber, py::arg("cfg"), py::arg("book"),
        py::arg("e_s_ant"), py::arg("e_s_mod_coupled"));
  m.def("mib", &mib, py::arg("e_b_eff"));
  m.def("dcmc_rate", &dcmc_rate, py::arg("cfg"), py::arg("book"),
        py::arg("mib_value"));
  m.def("analytic_performance", &analytic_performance, py::arg("cfg"),
        py::arg("book"));
  m.def("asymptotic_point", &asymptotic_point, py::arg("cfg"));

  m.def("normal_quantile", &normal_quantile, py::arg("p"));
  m.def("wilson_halfwidth", &wilson_halfwidth, py::arg("errors"), py::arg("n"),
        py::arg("confidence") = 0.95);
  m.def("point_seed", &point_seed, py::arg("base_seed"), py::arg("n_a"),
        py::arg("grid_index"));

  m.def("simulate", &simulate, py::arg("cfg"), py::arg("model"),
        py::arg("seed"), py::arg("trials"), py::arg("workers") = 1,
        py::call_guard<py::gil_scoped_release>(),
        "End-to-end Monte-Carlo trials at one operating point; totals are "
        "identical for every worker count.");

  m.def("sweep_snr", &sweep_snr, py::arg("base"), py::arg("model"),
        py::arg("n_a_list"), py::arg("spec"), py::arg("workers") = 1,
        py::arg("with_montecarlo") = true,
        py::call_guard<py::gil_scoped_release>());
  m.def("sweep_rho", &sweep_rho, py::arg("base"), py::arg("model"),
        py::arg("n_a_list"), py::arg("snr_b_db"), py::arg("spec"),
        py::arg("workers") = 1, py::arg("sd_only") = false,
        py::arg("with_montecarlo") = true,
        py::call_guard<py::gil_scoped_release>());
  m.def("sweep_load_ratio", &sweep_load_ratio, py::arg("n_t"), py::arg("m"),
        py::arg("n_a_list"), py::arg("rho_list"), py::arg("snr_b_db"),
        py::arg("alpha"), py::arg("spec"));

  m.def("records_to_csv", &records_to_csv, py::arg("records"),
        "Fixed, versioned CSV schema; identical to the command-line output.");

  m.def("parse_config_text", &parse_config_text, py::arg("text"));
  m.def("preset", &preset, py::arg("name"));
  m.def("preset_names", &preset_names);
}
