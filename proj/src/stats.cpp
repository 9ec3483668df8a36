#include "fhn/stats.hpp"

#include <cmath>
#include <limits>

#include "fhn/errors.hpp"
#include "fhn/oracle.hpp"
#include "fhn/rng.hpp"

namespace fhn {

NDistribution::NDistribution(const std::vector<int>& samples) {
  for (int v : samples) {
    if (v < 1) throw FhnError(ErrorCode::OutOfDomain, "NDistribution: N must be >= 1");
    ++counts_[v];
    ++total_;
    max_n_ = std::max(max_n_, v);
  }
  if (total_ == 0) throw FhnError(ErrorCode::OutOfDomain, "NDistribution: empty sample");
}

double NDistribution::p_n1() const {
  auto it = counts_.find(1);
  long c = it == counts_.end() ? 0 : it->second;
  return static_cast<double>(c) / total_;
}

double NDistribution::p_n1_se() const {
  double p = p_n1();
  return std::sqrt(std::max(p * (1.0 - p), 1e-12) / total_);
}

double NDistribution::mean() const {
  double s = 0.0;
  for (const auto& [n, c] : counts_) s += static_cast<double>(n) * c;
  return s / total_;
}

double NDistribution::mean_se() const {
  double m = mean();
  double v = 0.0;
  for (const auto& [n, c] : counts_) v += c * (n - m) * (n - m);
  return std::sqrt(v / (static_cast<double>(total_) - 1.0)) / std::sqrt(static_cast<double>(total_));
}

double NDistribution::mgf(double r) const {
  double s = 0.0;
  for (const auto& [n, c] : counts_) {
    double term = std::pow(r, n) * c;
    if (!std::isfinite(term)) return std::numeric_limits<double>::infinity();
    s += term;
  }
  return s / total_;
}

std::vector<double> default_mgf_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 2000; ++i) g.push_back(1.0 + 1e-3 * i);
  return g;
}

double mgf_pole_lambda0(const NDistribution& dist,
                        const std::vector<double>& r_grid,
                        double slope_threshold) {
  if (dist.max_n() < 5)
    throw FhnError(ErrorCode::InsufficientTail, "mgf_pole_lambda0: max N < 5");
  if (r_grid.size() < 3)
    throw FhnError(ErrorCode::ConfigError, "mgf_pole_lambda0: grid too small");
  std::vector<double> vals(r_grid.size());
  for (std::size_t i = 0; i < r_grid.size(); ++i) vals[i] = dist.mgf(r_grid[i]);
  for (std::size_t i = 1; i + 1 < r_grid.size(); ++i) {
    if (!std::isfinite(vals[i])) return 1.0 / r_grid[i];
    double slope = (vals[i + 1] - vals[i - 1]) / (r_grid[i + 1] - r_grid[i - 1]);
    if (slope > slope_threshold) return 1.0 / r_grid[i];
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double phi_spike_prob(const DerivedParams& d) {
  if (!(d.sigma_t > 0.0))
    throw FhnError(ErrorCode::OutOfDomain, "phi_spike_prob: sigma_t must be > 0");
  double arg = -std::pow(M_PI, 0.25) * d.mu_t / d.sigma_t;
  return normal_cdf(arg);
}

RegimeReport classify_regime(const DerivedParams& d) {
  if (!(d.sigma_t > 0.0))
    throw FhnError(ErrorCode::OutOfDomain, "classify_regime: sigma_t must be > 0");
  RegimeReport r;
  r.mu_sigma_ratio = d.mu_t / d.sigma_t;
  double sigma = std::hypot(d.sigma1, d.sigma2);
  double weak_scale = std::pow(d.eps, 0.25) * d.delta;
  r.sigma_over_weak = weak_scale != 0.0 ? sigma / weak_scale
                                        : std::numeric_limits<double>::infinity();
  r.sigma_over_strong = sigma / std::pow(d.eps, 0.75);
  if (r.mu_sigma_ratio > 3.0) {
    r.regime = NoiseRegime::Weak;
  } else if (r.mu_sigma_ratio < -3.0) {
    r.regime = NoiseRegime::Strong;
  } else {
    r.regime = NoiseRegime::Intermediate;
  }
  return r;
}

SweepRow summary_row(const DerivedParams& d, const std::vector<int>& n_samples,
                     std::uint64_t bootstrap_seed) {
  NDistribution dist(n_samples);
  SweepRow row;
  row.mu_t = d.mu_t;
  row.sigma_t = d.sigma_t;
  row.ratio = d.sigma_t > 0.0 ? d.mu_t / d.sigma_t : 0.0;
  row.n_spikes = dist.total();
  row.p_n1 = dist.p_n1();
  row.p_n1_err = dist.p_n1_se();
  double m = dist.mean();
  row.inv_mean = 1.0 / m;
  row.inv_mean_err = dist.mean_se() / (m * m);
  row.phi = d.sigma_t > 0.0 ? phi_spike_prob(d) : 0.0;

  auto grid = default_mgf_grid();
  double lam = std::numeric_limits<double>::quiet_NaN();
  try {
    lam = mgf_pole_lambda0(dist, grid);
  } catch (const FhnError&) {
    // tail too short; leave NaN
  }
  row.one_minus_lambda0 = 1.0 - lam;

  // bootstrap the pole estimate
  if (std::isfinite(lam)) {
    RngStream rng = make_rng_stream(bootstrap_seed, 0);
    const int n_boot = 50;
    std::vector<double> vals;
    std::vector<int> resample(n_samples.size());
    for (int b = 0; b < n_boot; ++b) {
      for (auto& v : resample) {
        std::size_t idx = static_cast<std::size_t>(rng.next_uniform() * n_samples.size());
        if (idx >= n_samples.size()) idx = n_samples.size() - 1;
        v = n_samples[idx];
      }
      try {
        double l = mgf_pole_lambda0(NDistribution(resample), grid);
        if (std::isfinite(l)) vals.push_back(l);
      } catch (const FhnError&) {
      }
    }
    if (vals.size() > 1) {
      double mean = 0.0;
      for (double v : vals) mean += v;
      mean /= vals.size();
      double var = 0.0;
      for (double v : vals) var += (v - mean) * (v - mean);
      row.one_minus_lambda0_err = std::sqrt(var / (vals.size() - 1));
    }
  }
  return row;
}

}  // namespace fhn
