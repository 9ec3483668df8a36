#include "fhn/poincare.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>

#include "fhn/errors.hpp"
#include "fhn/transforms.hpp"

namespace fhn {

double Chart::f_xi_end() const {
  double dz = f_z - z_P;
  double half = rho * rho - dz * dz;
  if (half < 0.0) throw FhnError(ErrorCode::ChartInvalid, "F cannot reach the ball");
  return xi_P - std::sqrt(half);
}

double Chart::r_of_xi(double xi) const {
  return (xi - xi_min) / (f_xi_end() - xi_min);
}

double Chart::xi_of_r(double r) const {
  return xi_min + r * (f_xi_end() - xi_min);
}

bool Chart::in_domain(double xi, double z) const {
  return xi >= xi_min && xi <= xi_max && z >= z_min && z <= z_max;
}

bool Chart::in_ball(double xi, double z) const {
  double dx = xi - xi_P, dz = z - z_P;
  return dx * dx + dz * dz <= rho * rho;
}

void Chart::validate() const {
  if (!(xi_min < xi_max && z_min < z_max))
    throw FhnError(ErrorCode::ChartInvalid, "domain rectangle is empty");
  if (!(xi_P > xi_min && xi_P < xi_max && z_P > z_min && z_P < z_max))
    throw FhnError(ErrorCode::ChartInvalid, "P outside the domain");
  if (!(xi_P - rho > xi_min && xi_P + rho < xi_max && z_P - rho > z_min &&
        z_P + rho < z_max))
    throw FhnError(ErrorCode::ChartInvalid, "ball not inside the domain");
  if (!(rho > 0.0)) throw FhnError(ErrorCode::ChartInvalid, "rho must be > 0");
  if (std::abs(f_z - z_P) >= rho)
    throw FhnError(ErrorCode::ChartInvalid, "F height misses the ball");
  if (M < 1) throw FhnError(ErrorCode::ChartInvalid, "M must be >= 1");
}

Chart default_chart(const DerivedParams& d) {
  Chart c;
  c.xi_P = -d.mu_t;
  c.z_P = 0.5;
  c.f_z = 0.5;
  c.validate();
  return c;
}

std::vector<std::array<double, 2>> compute_separatrix(const DerivedParams& d,
                                                      double dt_factor,
                                                      double t_max) {
  // negative-time orbit of the nullcline local maximum, original frame
  double x = -1.0 / std::sqrt(3.0);
  double y = 2.0 / (3.0 * std::sqrt(3.0));
  double dt = -dt_factor * d.eps;
  std::vector<std::array<double, 2>> poly;
  auto mapped = original_to_scaled(x, y, d);
  poly.push_back(mapped);
  long n_max = static_cast<long>(t_max / (dt_factor * d.eps));
  std::array<double, 2> s{x, y};
  for (long i = 0; i < n_max; ++i) {
    s = rk4_step(s, d, dt, Frame::Original);
    mapped = original_to_scaled(s[0], s[1], d);
    poly.push_back(mapped);
    if (std::abs(mapped[0]) > 6.0 || mapped[1] > 8.0 || mapped[1] < -5.0) break;
    if (!std::isfinite(s[0]) || !std::isfinite(s[1])) break;
  }
  std::reverse(poly.begin(), poly.end());  // forward-time order
  return poly;
}

std::vector<double> lift_winding(std::span<const std::array<double, 2>> states,
                                 const Chart& chart) {
  std::vector<double> phi;
  phi.reserve(states.size());
  if (states.empty()) return phi;
  double a_prev = std::atan2(states[0][1] - chart.z_P, states[0][0] - chart.xi_P);
  double lifted = a_prev;
  phi.push_back(chart.winding_sign * lifted);
  for (std::size_t i = 1; i < states.size(); ++i) {
    double a = std::atan2(states[i][1] - chart.z_P, states[i][0] - chart.xi_P);
    double da = a - a_prev;
    if (da > M_PI) da -= 2.0 * M_PI;
    if (da < -M_PI) da += 2.0 * M_PI;
    if (std::abs(da) > M_PI / 2.0)
      throw FhnError(ErrorCode::StepTooCoarse,
                     "lift_winding: single-step angle change exceeds pi/2");
    lifted += da;
    a_prev = a;
    phi.push_back(chart.winding_sign * lifted);
  }
  return phi;
}

namespace {

struct StepEvents {
  bool f_cross = false;
  double f_cross_s = 0.0;
  double f_cross_r = 0.0;
  bool b_entry = false;
  double b_entry_s = 0.0;
  bool fired = false;
  double dphi = 0.0;
};

// Hybrid integrator: scaled frame inside D, original frame (dt = eps/100)
// outside, switching at the box with the exact coordinate maps.
class SaoEngine {
 public:
  SaoEngine(const DerivedParams& d, const Chart& chart, RngStream& rng,
            const EngineConfig& cfg)
      : d_(d), chart_(chart), rng_(rng), cfg_(cfg) {
    dt_orig_ = d.eps / 100.0;
    sqe_ = std::sqrt(d.eps);
  }

  void set_state_scaled(double xi, double z) {
    scaled_ = {xi, z};
    frame_ = Frame::Scaled;
    if (!chart_.in_domain(xi, z)) to_original_frame();
  }

  double t_scaled() const { return t_scaled_; }
  double t_original() const { return t_orig_; }
  const std::array<double, 2>& scaled_state() const { return scaled_; }

  StepEvents step(bool track_winding) {
    StepEvents ev;
    std::array<double, 2> prev = scaled_;
    if (frame_ == Frame::Scaled) {
      double dt = cfg_.dt_scaled;
      auto [w1, w2] = draw(dt);
      scaled_ = scaled_em_step(scaled_[0], scaled_[1], d_, dt, w1, w2);
      t_scaled_ += dt;
      t_orig_ += dt * sqe_;
      if (!chart_.in_domain(scaled_[0], scaled_[1])) to_original_frame();
    } else {
      double dt = dt_orig_;
      auto [w1, w2] = draw(dt);
      orig_ = original_em_step(orig_[0], orig_[1], d_, dt, w1, w2);
      t_orig_ += dt;
      t_scaled_ += dt / sqe_;
      scaled_ = original_to_scaled(orig_[0], orig_[1], d_);
      if (orig_[0] <= chart_.spike_x) ev.fired = true;
      if (chart_.in_domain(scaled_[0], scaled_[1])) frame_ = Frame::Scaled;
    }
    if (!std::isfinite(scaled_[0]) || !std::isfinite(scaled_[1]))
      throw FhnError(ErrorCode::NonFinite, "sao engine: non-finite state");

    detect_f_cross(prev, scaled_, ev);
    detect_b_entry(prev, scaled_, ev);
    if (track_winding) ev.dphi = winding_increment(prev, scaled_);
    return ev;
  }

 private:
  std::pair<double, double> draw(double dt) {
    int k = cfg_.noise_split;
    double sd = std::sqrt(dt / k);
    double w1 = 0.0, w2 = 0.0;
    for (int i = 0; i < k; ++i) {
      w1 += sd * rng_.next_normal();
      w2 += sd * rng_.next_normal();
    }
    return {w1, w2};
  }

  void to_original_frame() {
    auto o = scaled_to_original(scaled_[0], scaled_[1], d_);
    orig_ = o;
    frame_ = Frame::Original;
  }

  void detect_f_cross(const std::array<double, 2>& a,
                      const std::array<double, 2>& b, StepEvents& ev) const {
    double da = a[1] - chart_.f_z, db = b[1] - chart_.f_z;
    if (da == 0.0 || da * db >= 0.0) return;
    double s = da / (da - db);
    double xi = a[0] + s * (b[0] - a[0]);
    if (xi < chart_.xi_min || xi > chart_.f_xi_end()) return;
    ev.f_cross = true;
    ev.f_cross_s = s;
    double r = chart_.r_of_xi(xi);
    ev.f_cross_r = std::clamp(r, 1e-12, 1.0 - 1e-12);
  }

  void detect_b_entry(const std::array<double, 2>& a,
                      const std::array<double, 2>& b, StepEvents& ev) const {
    bool a_in = chart_.in_ball(a[0], a[1]);
    bool b_in = chart_.in_ball(b[0], b[1]);
    if (a_in || !b_in) return;
    // |a + s (b-a) - P|^2 = rho^2, smallest root in [0,1]
    double px = a[0] - chart_.xi_P, pz = a[1] - chart_.z_P;
    double vx = b[0] - a[0], vz = b[1] - a[1];
    double A = vx * vx + vz * vz;
    double B = 2.0 * (px * vx + pz * vz);
    double C = px * px + pz * pz - chart_.rho * chart_.rho;
    double s = 1.0;
    double disc = B * B - 4.0 * A * C;
    if (A > 0.0 && disc >= 0.0) {
      double root = (-B - std::sqrt(disc)) / (2.0 * A);
      if (root >= 0.0 && root <= 1.0) s = root;
    }
    ev.b_entry = true;
    ev.b_entry_s = s;
  }

  double winding_increment(const std::array<double, 2>& a,
                           const std::array<double, 2>& b) const {
    double a0 = std::atan2(a[1] - chart_.z_P, a[0] - chart_.xi_P);
    double a1 = std::atan2(b[1] - chart_.z_P, b[0] - chart_.xi_P);
    double da = a1 - a0;
    if (da > M_PI) da -= 2.0 * M_PI;
    if (da < -M_PI) da += 2.0 * M_PI;
    return chart_.winding_sign * da;
  }

  const DerivedParams& d_;
  const Chart& chart_;
  RngStream& rng_;
  EngineConfig cfg_;
  Frame frame_ = Frame::Scaled;
  std::array<double, 2> scaled_{0.0, 0.0};
  std::array<double, 2> orig_{0.0, 0.0};
  double dt_orig_ = 0.0;
  double sqe_ = 0.0;
  double t_scaled_ = 0.0;
  double t_orig_ = 0.0;
};

// z-drift balance below the nullcline; the natural height of the incoming
// branch at a given xi < 0
double inflow_height(const DerivedParams& d, double xi) {
  auto f = scaled_drift(xi, 0.0, d);
  double dfz_dz = 2.0 * xi - std::sqrt(d.eps) * d.c;
  double z = (dfz_dz != 0.0) ? -f[1] / dfz_dz : 0.1;
  return std::clamp(z, 0.01, 0.45);
}

enum class Mode { PreEntry, Step, QuiescentWait };

}  // namespace

std::vector<int> SpikeTrain::n_values() const {
  std::vector<int> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.N);
  return out;
}

SaoOutcome count_saos_once(const DerivedParams& d, const Chart& chart, double r,
                           RngStream& stream, const EngineConfig& cfg) {
  chart.validate();
  if (!(r > 0.0 && r < 1.0))
    throw FhnError(ErrorCode::OutOfDomain, "count_saos_once: r outside (0,1)");
  SaoEngine eng(d, chart, stream, cfg);
  eng.set_state_scaled(chart.xi_of_r(r), chart.f_z);
  double t0 = eng.t_scaled();
  double phi = 0.0;
  Mode mode = Mode::Step;
  while (true) {
    StepEvents ev = eng.step(mode == Mode::Step);
    double t = eng.t_scaled() - t0;
    if (ev.fired) return {SaoKind::Spike, 0.0, t};
    if (mode == Mode::Step) {
      bool f_first = ev.f_cross && (!ev.b_entry || ev.f_cross_s <= ev.b_entry_s);
      if (f_first) {
        double phi_cross = phi + ev.dphi * ev.f_cross_s;
        long k = std::lround(phi_cross / (2.0 * M_PI));
        if (k >= 1) return {SaoKind::Rotation, ev.f_cross_r, t};
        if (k <= -chart.M) return {SaoKind::BackWinding, ev.f_cross_r, t};
      }
      phi += ev.dphi;
      if (ev.b_entry) mode = Mode::QuiescentWait;
    } else if (mode == Mode::QuiescentWait) {
      if (ev.f_cross) return {SaoKind::Quiescent, ev.f_cross_r, t};
    }
    if (t > cfg.t_max_scaled) {
      if (mode == Mode::QuiescentWait) return {SaoKind::Quiescent, 1.0, t};
      throw FhnError(ErrorCode::HorizonExceeded, "count_saos_once: no stop before horizon");
    }
  }
}

SpikeTrain run_spike_train(const DerivedParams& d, const Chart& chart,
                           int n_spikes, std::uint64_t master_seed,
                           const EngineConfig& cfg, std::uint64_t stream_index) {
  chart.validate();
  if (n_spikes < 1)
    throw FhnError(ErrorCode::ConfigError, "run_spike_train: n_spikes must be >= 1");
  RngStream stream = make_rng_stream(master_seed, stream_index);
  SpikeTrain train;
  train.master_seed = master_seed;
  SaoEngine eng(d, chart, stream, cfg);
  if (cfg.start_scaled) {
    eng.set_state_scaled((*cfg.start_scaled)[0], (*cfg.start_scaled)[1]);
  } else {
    double xi0 = chart.xi_min - 1.0;
    eng.set_state_scaled(xi0, inflow_height(d, xi0));
  }

  Mode mode = Mode::PreEntry;
  double phi = 0.0;
  double interval_t0 = eng.t_scaled();
  double last_spike_ts = eng.t_scaled();
  double last_spike_to = eng.t_original();
  InterspikeRecord rec;
  bool in_excursion = false;
  long step_count = 0;
  auto trace_point = [&]() {
    if (cfg.trace_stride <= 0 || step_count % cfg.trace_stride != 0) return;
    train.trace.times.push_back(eng.t_original());
    train.trace.states.push_back(eng.scaled_state());
  };
  auto trace_event = [&](const char* label) {
    if (cfg.trace_stride <= 0) return;
    train.trace_events.push_back({eng.t_original(), label});
  };
  train.trace.frame = Frame::Scaled;
  trace_point();

  while (static_cast<int>(train.records.size()) < n_spikes) {
    if (eng.t_scaled() >= cfg.t_total_scaled) break;
    StepEvents ev = eng.step(mode == Mode::Step && !in_excursion);
    ++step_count;
    trace_point();

    if (in_excursion) {
      // waiting for the reinjected path to come back into D
      if (chart.in_domain(eng.scaled_state()[0], eng.scaled_state()[1])) {
        in_excursion = false;
        mode = Mode::PreEntry;
        interval_t0 = eng.t_scaled();
      }
      continue;
    }

    if (ev.fired) {
      rec.N = rec.has_entry ? static_cast<int>(rec.R_sequence.size()) : 1;
      rec.isi_scaled = eng.t_scaled() - last_spike_ts;
      rec.isi_original = eng.t_original() - last_spike_to;
      last_spike_ts = eng.t_scaled();
      last_spike_to = eng.t_original();
      train.records.push_back(rec);
      rec = InterspikeRecord{};
      in_excursion = true;
      phi = 0.0;
      continue;
    }

    switch (mode) {
      case Mode::PreEntry:
        if (ev.f_cross) {
          rec.has_entry = true;
          rec.entry_r = ev.f_cross_r;
          rec.R_sequence.push_back(ev.f_cross_r);
          mode = Mode::Step;
          phi = 0.0;
        }
        break;
      case Mode::Step: {
        bool f_first = ev.f_cross && (!ev.b_entry || ev.f_cross_s <= ev.b_entry_s);
        if (f_first) {
          double phi_cross = phi + ev.dphi * ev.f_cross_s;
          long k = std::lround(phi_cross / (2.0 * M_PI));
          if (k >= 1 || k <= -chart.M) {
            rec.R_sequence.push_back(ev.f_cross_r);
            phi = ev.dphi * (1.0 - ev.f_cross_s);
            if (ev.b_entry && ev.b_entry_s >= ev.f_cross_s) mode = Mode::QuiescentWait;
            break;
          }
        }
        phi += ev.dphi;
        if (ev.b_entry) mode = Mode::QuiescentWait;
        break;
      }
      case Mode::QuiescentWait:
        if (ev.f_cross) {
          rec.R_sequence.push_back(ev.f_cross_r);
          mode = Mode::Step;
          phi = 0.0;
        }
        break;
    }

    if (eng.t_scaled() - interval_t0 > cfg.t_max_scaled)
      throw FhnError(ErrorCode::HorizonExceeded,
                     "run_spike_train: interval exceeded the horizon");
  }
  return train;
}

SpikeTrain run_spike_trains_parallel(const DerivedParams& d, const Chart& chart,
                                     int n_spikes_total, std::uint64_t master_seed,
                                     int n_threads, const EngineConfig& cfg,
                                     int spikes_per_chunk) {
  if (n_threads <= 0) n_threads = static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  int n_chunks = (n_spikes_total + spikes_per_chunk - 1) / spikes_per_chunk;
  std::vector<SpikeTrain> parts(static_cast<std::size_t>(n_chunks));
  std::vector<std::string> failures(static_cast<std::size_t>(n_chunks));
  std::atomic<int> next{0};
  auto worker = [&]() {
    while (true) {
      int c = next.fetch_add(1);
      if (c >= n_chunks) return;
      int want = std::min(spikes_per_chunk, n_spikes_total - c * spikes_per_chunk);
      try {
        // one chunk = one stream; stream index keys the chunk, so the pooled
        // result is independent of the thread count
        parts[static_cast<std::size_t>(c)] = run_spike_train(
            d, chart, want, master_seed, cfg, static_cast<std::uint64_t>(c));
      } catch (const FhnError& e) {
        failures[static_cast<std::size_t>(c)] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < std::min(n_threads, n_chunks); ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (const auto& f : failures)
    if (!f.empty()) throw FhnError(ErrorCode::HorizonExceeded, f);
  SpikeTrain out;
  out.master_seed = master_seed;
  for (auto& p : parts)
    out.records.insert(out.records.end(), p.records.begin(), p.records.end());
  return out;
}

ClusterHistogram cluster_lengths(const std::vector<int>& n_values, int n0) {
  if (n0 < 1) throw FhnError(ErrorCode::ConfigError, "cluster_lengths: n0 must be >= 1");
  ClusterHistogram h;
  long below = 0;
  long run = 0;
  auto flush = [&]() {
    if (run == 0) return;
    if (h.size_counts.size() < static_cast<std::size_t>(run))
      h.size_counts.resize(static_cast<std::size_t>(run), 0);
    ++h.size_counts[static_cast<std::size_t>(run - 1)];
    run = 0;
  };
  for (int n : n_values) {
    if (n <= n0) {
      ++below;
      ++run;
    } else {
      flush();
    }
  }
  flush();
  h.p_hat = n_values.empty() ? 0.0 : static_cast<double>(below) / n_values.size();
  return h;
}

}  // namespace fhn
