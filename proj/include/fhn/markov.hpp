#pragma once

#include <cstdint>
#include <vector>

#include "fhn/params.hpp"
#include "fhn/poincare.hpp"

namespace fhn {

/// Binned Monte-Carlo estimate of the substochastic kernel K on F,
/// together with its principal eigenvalue and the associated left/right
/// eigenvectors (quasi-stationary distribution pi0 and harmonic h0).
struct KernelEstimate {
  std::vector<double> bin_edges;         // n_bins + 1 edges over (0, 1)
  std::vector<std::vector<double>> matrix;  // row-substochastic
  std::vector<long> counts;              // launches per row
  std::vector<long> horizon_failures;    // per-row runs lost to the horizon
  double lambda0 = 0.0;
  double lambda0_se = 0.0;               // bootstrap standard error
  std::vector<double> pi0;               // sums to 1
  std::vector<double> h0;                // positive, pi0 . h0 = 1

  int n_bins() const { return static_cast<int>(matrix.size()); }
};

struct EigenTriple {
  double lambda0 = 0.0;
  std::vector<double> pi0;
  std::vector<double> h0;
};

/// Power iteration on m and its transpose to a 1e-10 eigenvalue increment,
/// normalized so sum(pi0) = 1 and pi0 . h0 = 1.  Throws NotConverged after
/// 1e5 iterations.
EigenTriple principal_eigen(const std::vector<std::vector<double>>& m);

/// Launch samples_per_bin chain steps from every bin midpoint and bin the
/// chain-continuing outcomes (rotation / quiescent return / backwinding);
/// spikes show up as row deficit.  Horizon losses are counted separately,
/// never silently dropped.  Bootstrap (100 resamples) gives lambda0_se.
KernelEstimate estimate_kernel(const DerivedParams& d, const Chart& chart,
                               int n_bins, int samples_per_bin,
                               std::uint64_t master_seed, int n_threads = 0,
                               const EngineConfig& cfg = {});

struct TailEstimate {
  std::vector<int> n;        // tail index
  std::vector<double> p;     // empirical P(N = n+1 | N > n)
  std::vector<double> se;    // binomial standard errors
};

/// Empirical conditional stopping probabilities of the SAO count;
/// undefined entries (no survivors) are omitted.
TailEstimate geometric_tail(const std::vector<int>& n_samples);

/// Replay the discretized chain from pi0; the resulting N is geometric
/// with parameter 1 - lambda0 exactly.
std::vector<int> qsd_replay(const KernelEstimate& k, int n_chains,
                            std::uint64_t master_seed);

}  // namespace fhn
