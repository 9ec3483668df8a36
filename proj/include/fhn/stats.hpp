#pragma once

#include <map>
#include <vector>

#include "fhn/params.hpp"

namespace fhn {

/// Empirical distribution of the SAO count N.
class NDistribution {
 public:
  explicit NDistribution(const std::vector<int>& samples);

  long total() const { return total_; }
  int max_n() const { return max_n_; }
  double p_n1() const;             // P(N = 1)
  double p_n1_se() const;          // binomial standard error
  double mean() const;
  double mean_se() const;
  /// Empirical moment generating function r -> mean of r^N.  Diverging
  /// estimates (overflow past the pole) come back as +inf.
  double mgf(double r) const;
  const std::map<int, long>& counts() const { return counts_; }

 private:
  std::map<int, long> counts_;
  long total_ = 0;
  int max_n_ = 0;
};

/// Principal-eigenvalue estimate from the simple pole of the empirical MGF:
/// lambda0 = 1/r*, where r* is the first grid point whose centered-
/// difference slope exceeds slope_threshold.  Returns NaN if the slope
/// never exceeds the threshold.  Throws InsufficientTail if max N < 5.
double mgf_pole_lambda0(const NDistribution& dist,
                        const std::vector<double>& r_grid,
                        double slope_threshold = 1e3);

/// Default pole-detection grid r = 1.001, 1.002, ..., 3.0.
std::vector<double> default_mgf_grid();

/// P{N = 1} approximation Phi(-pi^(1/4) mu_t / sigma_t).
double phi_spike_prob(const DerivedParams& d);

enum class NoiseRegime { Weak, Intermediate, Strong };

struct RegimeReport {
  NoiseRegime regime = NoiseRegime::Intermediate;
  double mu_sigma_ratio = 0.0;       // mu_t / sigma_t
  double sigma_over_weak = 0.0;      // sigma / (eps^(1/4) delta)
  double sigma_over_strong = 0.0;    // sigma / eps^(3/4)
};

/// Weak if mu_t/sigma_t > 3, strong if < -3, intermediate otherwise; the
/// raw ratios are always reported so callers can re-threshold.
RegimeReport classify_regime(const DerivedParams& d);

struct SweepRow {
  double mu_t = 0.0;
  double sigma_t = 0.0;
  double ratio = 0.0;        // mu_t / sigma_t
  double p_n1 = 0.0, p_n1_err = 0.0;
  double inv_mean = 0.0, inv_mean_err = 0.0;
  double one_minus_lambda0 = 0.0, one_minus_lambda0_err = 0.0;
  double phi = 0.0;          // Phi(-pi^(1/4) mu_t/sigma_t)
  long n_spikes = 0;
};

/// Assemble one sweep row from a sample of N values (lambda0 estimated via
/// the MGF pole; its error from a bootstrap over the samples).
SweepRow summary_row(const DerivedParams& d, const std::vector<int>& n_samples,
                     std::uint64_t bootstrap_seed = 7);

}  // namespace fhn
