#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fhn/params.hpp"
#include "fhn/poincare.hpp"
#include "fhn/sde.hpp"

namespace fhn {

/// Flat `key = value` configuration file, `#` comments, no nesting.
class KeyValueFile {
 public:
  static KeyValueFile parse_file(const std::string& path);
  static KeyValueFile parse_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  long get_long(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;  // comma-separated

  double get_double_or(const std::string& key, double fallback) const;
  long get_long_or(const std::string& key, long fallback) const;
  std::string get_string_or(const std::string& key, const std::string& fallback) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

/// Model parameters, chart overrides, sim settings and experiment knobs
/// assembled from a config file.  Exactly one of the parameterizations
/// (a, c, eps, sigma1, sigma2) or (mu_t, sigma_t, eps) must be given; the
/// scaled triple is inverted through the derived-parameter relations with
/// c = 0 and sigma1 = sigma2.
struct ExperimentConfig {
  ModelParams model;
  DerivedParams derived;
  Chart chart;
  EngineConfig engine;
  SimConfig sim;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  int threads = 0;

  // experiment knobs
  long n_spikes = 1000;
  int n_bins = 64;
  int samples_per_bin = 500;
  std::vector<double> mu_t_list;  // sweep points
  double sweep_sigma_t = 0.1;
  double x0 = 0.0, y0 = 0.0;      // simulate starting point (original frame)
  bool have_start = false;
  bool kernel_lambda0 = false;    // histogram: also run the kernel estimator

  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_kv(const KeyValueFile& kv);
};

}  // namespace fhn
