#include "gpsm/config.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace gpsm {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw std::invalid_argument("bad value for config key '" + key +
                              "': " + value);
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) bad_value(key, value);
    return v;
  } catch (const std::invalid_argument&) {
    bad_value(key, value);
  } catch (const std::out_of_range&) {
    bad_value(key, value);
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) bad_value(key, value);
    return v;
  } catch (const std::invalid_argument&) {
    bad_value(key, value);
  } catch (const std::out_of_range&) {
    bad_value(key, value);
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size() || (!value.empty() && value[0] == '-'))
      bad_value(key, value);
    return v;
  } catch (const std::invalid_argument&) {
    bad_value(key, value);
  } catch (const std::out_of_range&) {
    bad_value(key, value);
  }
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) items.push_back(trim(item));
  return items;
}

std::vector<double> parse_real_list(const std::string& key,
                                    const std::string& value) {
  std::vector<double> out;
  for (const auto& item : split_list(value)) out.push_back(parse_real(key, item));
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true") return true;
  if (value == "0" || value == "false") return false;
  bad_value(key, value);
}

void apply_key(RunConfig& rc, const std::string& key,
               const std::string& value) {
  if (key == "n_t") {
    rc.n_t = static_cast<int>(parse_int(key, value));
  } else if (key == "n_r") {
    rc.n_r = static_cast<int>(parse_int(key, value));
  } else if (key == "n_a_list") {
    rc.n_a_list.clear();
    for (const auto& item : split_list(value))
      rc.n_a_list.push_back(item == "conv"
                                ? -1
                                : static_cast<int>(parse_int(key, item)));
  } else if (key == "modulation") {
    if (value == "bpsk")
      rc.m = 2;
    else if (value == "qpsk")
      rc.m = 4;
    else if (value == "16qam")
      rc.m = 16;
    else
      bad_value(key, value);
  } else if (key == "rho") {
    rc.rho = parse_real(key, value);
  } else if (key == "alpha") {
    rc.alpha = parse_real(key, value);
  } else if (key == "snr_b_db") {
    rc.snr_b_db = parse_real(key, value);
  } else if (key == "snr_db_list") {
    rc.snr_db_list = parse_real_list(key, value);
  } else if (key == "rho_list") {
    rc.rho_list = parse_real_list(key, value);
  } else if (key == "ratio_list") {
    rc.ratio_list = parse_real_list(key, value);
  } else if (key == "trials") {
    rc.trials = parse_int(key, value);
  } else if (key == "seed") {
    rc.seed = parse_u64(key, value);
  } else if (key == "workers") {
    rc.workers = static_cast<int>(parse_int(key, value));
  } else if (key == "confidence") {
    rc.confidence = parse_real(key, value);
  } else if (key == "sd_only") {
    rc.sd_only = parse_bool(key, value);
  } else if (key == "power_norm") {
    if (value == "strict")
      rc.mode = PowerMode::strict;
    else if (value == "relaxed")
      rc.mode = PowerMode::relaxed;
    else
      bad_value(key, value);
  } else if (key == "sigma2_e") {
    rc.sigma2_e = parse_real(key, value);
  } else if (key == "rho_t") {
    rc.rho_t = parse_real(key, value);
  } else if (key == "rho_r") {
    rc.rho_r = parse_real(key, value);
  } else {
    throw std::invalid_argument("unknown config key: " + key);
  }
}

}  // namespace

void RunConfig::validate() const {
  if (n_r < 1 || n_t < n_r)
    throw std::invalid_argument("need n_t >= n_r >= 1");
  if (m != 2 && m != 4 && m != 16)
    throw std::invalid_argument("modulation order must be 2, 4 or 16");
  if (n_a_list.empty())
    throw std::invalid_argument("n_a_list must not be empty");
  for (int n_a : n_a_list)
    if (n_a != -1 && (n_a < 1 || n_a > n_t))
      throw std::invalid_argument("entries of n_a_list must be conv or >= 1");
  if (rho < 0.0 || rho > 1.0)
    throw std::invalid_argument("rho must lie in [0, 1]");
  if (alpha <= 0.0 || alpha > 1.0)
    throw std::invalid_argument("alpha must lie in (0, 1]");
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  if (workers < 1) throw std::invalid_argument("workers must be positive");
  if (confidence <= 0.0 || confidence >= 1.0)
    throw std::invalid_argument("confidence must lie in (0, 1)");
  if (sigma2_e < 0.0 || sigma2_e >= 1.0)
    throw std::invalid_argument("sigma2_e must lie in [0, 1)");
  if (rho_t < 0.0 || rho_t >= 1.0 || rho_r < 0.0 || rho_r >= 1.0)
    throw std::invalid_argument("correlation must lie in [0, 1)");
  if (sigma2_e > 0.0 && (rho_t > 0.0 || rho_r > 0.0))
    throw std::invalid_argument(
        "CSIT error and antenna correlation are mutually exclusive");
}

ChannelModel RunConfig::channel_model() const {
  return {n_t, n_r, rho_t, rho_r, sigma2_e};
}

SystemConfig RunConfig::system_base() const {
  SystemConfig cfg;
  cfg.n_t = n_t;
  cfg.n_r = n_r;
  cfg.n_a = 1;
  cfg.m = m;
  cfg.rho = rho;
  cfg.alpha = alpha;
  cfg.sigma2 = 1.0;
  cfg.mode = mode;
  return cfg;
}

std::vector<int> RunConfig::resolved_n_a(bool per_point_conventional) const {
  std::vector<int> out;
  for (int n_a : n_a_list)
    out.push_back(n_a == -1 ? (per_point_conventional ? 0 : n_r) : n_a);
  return out;
}

void apply_config_text(RunConfig& rc, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key=value");
    apply_key(rc, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig rc;
  apply_config_text(rc, text);
  rc.validate();
  return rc;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

namespace {

// each preset is plain config text so the parser stays the single source
// of truth for the schema
const std::map<std::string, const char*>& preset_table() {
  static const std::map<std::string, const char*> table = {
      {"fig2",
       "# SNR sweep, detection-only receiver (rho=0)\n"
       "n_t=16\nn_r=8\nn_a_list=1,2,4\nmodulation=qpsk\nrho=0\nalpha=1\n"
       "snr_db_list=-10,-8,-6,-4,-2,0,2,4,6,8,10,12\ntrials=20000\nseed=2\n"},
      {"fig3",
       "# SNR sweep with half the power harvested\n"
       "n_t=16\nn_r=8\nn_a_list=2,4,conv\nmodulation=qpsk\nrho=0.5\n"
       "alpha=0.4\n"
       "snr_db_list=-10,-8,-6,-4,-2,0,2,4,6,8,10,12\ntrials=20000\nseed=3\n"},
      {"fig4",
       "# pattern-bit information versus harvested energy\n"
       "n_t=16\nn_r=8\nn_a_list=1,2,4,6\nmodulation=qpsk\nalpha=0.4\n"
       "snr_b_db=0\nsd_only=1\n"
       "rho_list=0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1\n"
       "trials=20000\nseed=4\n"},
      {"fig5",
       "# full-throughput information versus harvested energy\n"
       "n_t=16\nn_r=8\nn_a_list=1,2,3,4,5,6,conv\nmodulation=qpsk\n"
       "alpha=0.4\nsnr_b_db=0\n"
       "rho_list=0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1\n"
       "trials=20000\nseed=5\n"},
      {"fig6",
       "# aggregate rate versus harvested energy\n"
       "n_t=16\nn_r=8\nn_a_list=1,2,3,4,5,6,conv\nmodulation=qpsk\n"
       "alpha=0.4\nsnr_b_db=0\n"
       "rho_list=0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1\n"
       "trials=20000\nseed=6\n"},
      {"fig7",
       "# SNR sweep under imperfect transmitter channel knowledge\n"
       "n_t=16\nn_r=8\nn_a_list=2,4,6,conv\nmodulation=qpsk\nrho=0.5\n"
       "alpha=0.4\nsigma2_e=0.2\n"
       "snr_db_list=-10,-8,-6,-4,-2,0,2,4,6,8,10,12\ntrials=20000\nseed=7\n"},
      {"fig8",
       "# large-array limit over the receive/transmit antenna ratio\n"
       "n_t=2048\nn_r=64\nn_a_list=1,2,conv\nmodulation=qpsk\nalpha=0.4\n"
       "snr_b_db=0\nrho_list=0.2,0.4,0.6,0.8\n"
       "ratio_list=0.03125,0.0625,0.125,0.25,0.375,0.5,0.625,0.75,0.875,"
       "0.96875,0.9990234375\n"
       "trials=10000\nseed=8\n"},
  };
  return table;
}

}  // namespace

RunConfig preset(const std::string& name) {
  const auto& table = preset_table();
  const auto it = table.find(name);
  if (it == table.end())
    throw std::invalid_argument("unknown preset: " + name);
  return parse_config_text(it->second);
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : preset_table()) names.push_back(name);
  return names;
}

}  // namespace gpsm
