#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gpsm/analytic.hpp"
#include "gpsm/channel.hpp"

namespace gpsm {

/// Everything a run needs, readable from a key=value file.  In n_a_list the
/// token `conv` (stored as -1) requests the conventional benchmark with all
/// receive antennas active; it resolves to n_r for fixed-geometry sweeps and
/// per grid point for load-ratio sweeps.
struct RunConfig {
  int n_t = 16;
  int n_r = 8;
  std::vector<int> n_a_list = {2};
  int m = 4;
  double rho = 0.0;
  double alpha = 1.0;
  double snr_b_db = 0.0;
  std::vector<double> snr_db_list = {0.0};
  std::vector<double> rho_list = {0.0};
  std::vector<double> ratio_list = {0.5};
  long trials = 10000;
  std::uint64_t seed = 1;
  int workers = 1;
  double confidence = 0.95;
  bool sd_only = false;
  PowerMode mode = PowerMode::strict;
  double sigma2_e = 0.0;
  double rho_t = 0.0;
  double rho_r = 0.0;

  void validate() const;
  ChannelModel channel_model() const;
  SystemConfig system_base() const;
  std::vector<int> resolved_n_a(bool per_point_conventional) const;
};

/// Applies key=value lines ('#' starts a comment, blank lines ignored) on
/// top of an existing configuration.  Unknown keys and malformed values are
/// reported by name with the line number.
void apply_config_text(RunConfig& rc, const std::string& text);

/// Fresh configuration from text, validated.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

/// Built-in configurations for the toolkit's reference experiments.  Throws
/// on unknown names; see preset_names() for the catalogue.
RunConfig preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace gpsm
