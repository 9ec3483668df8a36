#include "fhn/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "fhn/errors.hpp"

namespace fhn {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FhnError(ErrorCode::ConfigError, "cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

KeyValueFile KeyValueFile::parse_string(const std::string& text) {
  KeyValueFile kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw FhnError(ErrorCode::ConfigError,
                     "config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw FhnError(ErrorCode::ConfigError,
                     "config line " + std::to_string(lineno) + ": empty key");
    kv.entries_[key] = val;
  }
  return kv;
}

bool KeyValueFile::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string KeyValueFile::get_string(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end())
    throw FhnError(ErrorCode::ConfigError, "missing config key: " + key);
  return it->second;
}

double KeyValueFile::get_double(const std::string& key) const {
  const std::string v = get_string(key);
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw FhnError(ErrorCode::ConfigError, "config key " + key + ": not a number: " + v);
  }
}

long KeyValueFile::get_long(const std::string& key) const {
  const std::string v = get_string(key);
  try {
    std::size_t pos = 0;
    long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw FhnError(ErrorCode::ConfigError, "config key " + key + ": not an integer: " + v);
  }
}

std::uint64_t KeyValueFile::get_u64(const std::string& key) const {
  const std::string v = get_string(key);
  try {
    std::size_t pos = 0;
    unsigned long long d = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return static_cast<std::uint64_t>(d);
  } catch (const std::exception&) {
    throw FhnError(ErrorCode::ConfigError, "config key " + key + ": not a u64: " + v);
  }
}

std::vector<double> KeyValueFile::get_double_list(const std::string& key) const {
  std::vector<double> out;
  std::istringstream in(get_string(key));
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw FhnError(ErrorCode::ConfigError, "config key " + key + ": bad list item: " + item);
    }
  }
  if (out.empty())
    throw FhnError(ErrorCode::ConfigError, "config key " + key + ": empty list");
  return out;
}

double KeyValueFile::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long KeyValueFile::get_long_or(const std::string& key, long fallback) const {
  return has(key) ? get_long(key) : fallback;
}

std::string KeyValueFile::get_string_or(const std::string& key,
                                        const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  return from_kv(KeyValueFile::parse_file(path));
}

ExperimentConfig ExperimentConfig::from_kv(const KeyValueFile& kv) {
  ExperimentConfig c;
  bool direct = kv.has("a");
  bool scaled = kv.has("mu_t");
  if (direct == scaled)
    throw FhnError(ErrorCode::ConfigError,
                   "give exactly one of the parameterizations: "
                   "(a, c, eps, sigma1, sigma2) or (mu_t, sigma_t, eps)");
  if (direct) {
    c.model.a = kv.get_double("a");
    c.model.b = kv.get_double_or("b", 1.0);
    c.model.c = kv.get_double_or("c", 0.0);
    c.model.eps = kv.get_double("eps");
    c.model.sigma1 = kv.get_double_or("sigma1", 0.0);
    c.model.sigma2 = kv.get_double_or("sigma2", 0.0);
  } else {
    double mu_t = kv.get_double("mu_t");
    double sigma_t = kv.get_double("sigma_t");
    double eps = kv.get_double("eps");
    c.model = params_from_scaled(mu_t, sigma_t, eps);
    // inversion must round-trip
    DerivedParams chk = derive_params(c.model);
    if (std::abs(chk.mu_t - mu_t) > 1e-10 * (1.0 + std::abs(mu_t)) ||
        std::abs(chk.sigma_t - sigma_t) > 1e-10 * (1.0 + sigma_t))
      throw FhnError(ErrorCode::ConfigError, "scaled-triple inversion failed to round-trip");
  }
  c.derived = derive_params(c.model);

  c.chart = default_chart(c.derived);
  if (kv.has("chart.xi_min")) c.chart.xi_min = kv.get_double("chart.xi_min");
  if (kv.has("chart.xi_max")) c.chart.xi_max = kv.get_double("chart.xi_max");
  if (kv.has("chart.z_min")) c.chart.z_min = kv.get_double("chart.z_min");
  if (kv.has("chart.z_max")) c.chart.z_max = kv.get_double("chart.z_max");
  if (kv.has("chart.rho")) c.chart.rho = kv.get_double("chart.rho");
  if (kv.has("chart.f_z")) c.chart.f_z = kv.get_double("chart.f_z");
  if (kv.has("chart.M")) c.chart.M = static_cast<int>(kv.get_long("chart.M"));
  if (kv.has("chart.spike_x")) c.chart.spike_x = kv.get_double("chart.spike_x");
  c.chart.validate();

  c.engine.dt_scaled = kv.get_double_or("dt", 1e-4);
  c.engine.t_max_scaled = kv.get_double_or("t_max", 2e4);
  c.sim.dt = c.engine.dt_scaled;
  c.sim.t_max = kv.get_double_or("sim.t_max", 100.0);
  c.sim.record_stride = static_cast<int>(kv.get_long_or("sim.record_stride", 1));
  std::string frame = kv.get_string_or("sim.frame", "scaled");
  if (frame == "original") {
    c.sim.frame = Frame::Original;
  } else if (frame == "scaled") {
    c.sim.frame = Frame::Scaled;
  } else {
    throw FhnError(ErrorCode::ConfigError, "sim.frame must be original or scaled");
  }
  std::string scheme = kv.get_string_or("sim.scheme", "euler_maruyama");
  if (scheme == "euler_maruyama") {
    c.sim.scheme = Scheme::EulerMaruyama;
  } else if (scheme == "deterministic_rk4") {
    c.sim.scheme = Scheme::DeterministicRk4;
  } else {
    throw FhnError(ErrorCode::ConfigError, "sim.scheme must be euler_maruyama or deterministic_rk4");
  }

  c.seed = kv.has("seed") ? kv.get_u64("seed") : 1;
  c.out_dir = kv.get_string_or("out", ".");
  c.threads = static_cast<int>(kv.get_long_or("threads", 0));
  c.n_spikes = kv.get_long_or("n_spikes", 1000);
  c.n_bins = static_cast<int>(kv.get_long_or("n_bins", 64));
  c.samples_per_bin = static_cast<int>(kv.get_long_or("samples_per_bin", 500));
  if (kv.has("mu_t_list")) c.mu_t_list = kv.get_double_list("mu_t_list");
  c.sweep_sigma_t = kv.get_double_or("sweep_sigma_t", 0.1);
  if (kv.has("x0") || kv.has("y0")) {
    c.x0 = kv.get_double("x0");
    c.y0 = kv.get_double("y0");
    c.have_start = true;
  }
  c.kernel_lambda0 = kv.get_long_or("kernel_lambda0", 0) != 0;
  c.sim.seed = c.seed;
  return c;
}

}  // namespace fhn
