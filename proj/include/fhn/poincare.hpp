#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "fhn/params.hpp"
#include "fhn/rng.hpp"
#include "fhn/sde.hpp"

namespace fhn {

/// Geometric apparatus for SAO counting, all in scaled (xi, z) coordinates.
///
/// D is a rectangle, B a ball of radius rho around the focus P, and F a
/// horizontal segment from the left edge of D (r = 0) to the boundary of B
/// (r = 1).  Leaving D only marks a candidate spike; a spike is recorded
/// once the subsequent original-frame excursion drives x below spike_x
/// (the sample path physically fires).  Exits that return to D without
/// firing are treated as continued SAO dynamics; this keeps boundary
/// grazing of the reinjected path from registering phantom spikes.
struct Chart {
  double xi_min = -3.0, xi_max = 3.0;
  double z_min = -0.3, z_max = 1.5;
  double xi_P = 0.0, z_P = 0.5;  // focus of the scaled flow
  double rho = 0.05;             // ball radius
  double f_z = 0.5;              // height of the section F
  int M = 10;                    // negative-winding cutoff
  double winding_sign = 1.0;     // +1: deterministic rotation near P is positive
  double spike_x = 0.0;          // original-frame x level confirming a spike

  double f_xi_end() const;             // inner endpoint of F (on dB)
  double r_of_xi(double xi) const;     // arclength parameter along F
  double xi_of_r(double r) const;
  bool in_domain(double xi, double z) const;
  bool in_ball(double xi, double z) const;
  void validate() const;  // throws ChartInvalid
};

/// D = [-3,3] x [-0.3, 1.5], rho = 0.05, F at z = 1/2 spanning
/// [-3, xi_P - rho], M = 10.  Throws ChartInvalid if P falls outside D.
Chart default_chart(const DerivedParams& d);

/// Backward orbit of the nullcline local maximum (-1/sqrt(3), 2/(3 sqrt 3)),
/// integrated with RK4 in original coordinates and mapped to the scaled
/// frame.  Stops on leaving a generous bounding box or after t_max.
std::vector<std::array<double, 2>> compute_separatrix(const DerivedParams& d,
                                                      double dt_factor = 0.01,
                                                      double t_max = 10.0);

/// Continuous unwrap of the angle around P along a path segment that stays
/// in D \ B.  Throws StepTooCoarse if a single-step angle change exceeds
/// pi/2.
std::vector<double> lift_winding(std::span<const std::array<double, 2>> states,
                                 const Chart& chart);

enum class SaoKind { Spike, Rotation, Quiescent, BackWinding };

struct SaoOutcome {
  SaoKind kind = SaoKind::Spike;
  double r_exit = 0.0;    // position on F for chain-continuing outcomes
  double t_elapsed = 0.0; // scaled time spent in this chain step
};

struct InterspikeRecord {
  int N = 0;
  std::vector<double> R_sequence;  // R_0 .. R_{N-1} when the chain started
  bool has_entry = false;          // false: spike fired before any F hit
  double entry_r = 0.0;
  double isi_scaled = 0.0;
  double isi_original = 0.0;
};

struct SpikeTrain {
  std::vector<InterspikeRecord> records;
  std::uint64_t master_seed = 0;
  std::vector<int> n_values() const;
  /// Trajectory trace (original-time stamps, scaled states) and labelled
  /// events; only filled when EngineConfig::trace_stride > 0.
  Path trace;
  std::vector<PathEvent> trace_events;
};

struct EngineConfig {
  double dt_scaled = 1e-4;    // step inside D (scaled time)
  double t_max_scaled = 2e4;  // per-interval horizon (scaled time)
  /// Draw this many sub-increments per Wiener channel per step and sum
  /// them; 2 couples a dt run to the Brownian path of a dt/2 run.
  int noise_split = 1;
  /// Stop (without error) once this much scaled time has elapsed in total,
  /// even if fewer spikes than requested were seen.
  double t_total_scaled = std::numeric_limits<double>::infinity();
  int trace_stride = 0;  // record every nth step into SpikeTrain::trace
  /// Optional starting state in scaled coordinates (default: the incoming
  /// branch just outside the left edge of D).
  std::optional<std::array<double, 2>> start_scaled;
};

/// One Markov-chain step of the random Poincare map: integrate from
/// T(r) = (xi_of_r, f_z) until the stopping time, classifying per the four
/// cases (spike / rotation / quiescent / backwinding).  A quiescent visit
/// to B continues until F is hit again (reported r_exit) or the path
/// fires.  Deterministic paths that settle into B report Quiescent with
/// r_exit = 1 at the horizon.
SaoOutcome count_saos_once(const DerivedParams& d, const Chart& chart, double r,
                           RngStream& stream, const EngineConfig& cfg = {});

/// Continuous simulation until n_spikes spikes occurred, recording for
/// every interspike interval the SAO count N, the chain positions, and
/// both interval clocks.  Spikes are detected as exits from D whose
/// original-frame excursion fires (x <= spike_x); integration switches to
/// original coordinates with dt = eps/100 outside D.
/// Throws HorizonExceeded if an interval exceeds cfg.t_max_scaled.
SpikeTrain run_spike_train(const DerivedParams& d, const Chart& chart,
                           int n_spikes, std::uint64_t master_seed,
                           const EngineConfig& cfg = {},
                           std::uint64_t stream_index = 0);

/// Deterministically pooled parallel spike trains: the total is split into
/// fixed chunks (one RNG stream each), run across n_threads, and
/// concatenated in chunk order, so results do not depend on thread count.
SpikeTrain run_spike_trains_parallel(const DerivedParams& d, const Chart& chart,
                                     int n_spikes_total, std::uint64_t master_seed,
                                     int n_threads = 0,
                                     const EngineConfig& cfg = {},
                                     int spikes_per_chunk = 50);

struct ClusterHistogram {
  std::vector<long> size_counts;  // size_counts[k-1] = #clusters of length k
  double p_hat = 0.0;             // empirical P(N <= n0)
};

/// Maximal runs of consecutive interspike records with N <= n0.
ClusterHistogram cluster_lengths(const std::vector<int>& n_values, int n0);

}  // namespace fhn
