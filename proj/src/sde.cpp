#include "fhn/sde.hpp"

#include <cmath>
#include <thread>

#include "fhn/errors.hpp"

namespace fhn {

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw FhnError(ErrorCode::ConfigError, "dt must be > 0");
  if (!(t_max > dt)) throw FhnError(ErrorCode::ConfigError, "t_max must exceed dt");
  if (record_stride < 1) throw FhnError(ErrorCode::ConfigError, "record_stride must be >= 1");
}

std::array<double, 2> original_drift(double x, double y, const DerivedParams& d) {
  return {(x - x * x * x + y) / d.eps, d.a - x - d.c * y};
}

std::array<double, 2> scaled_drift(double xi, double z, const DerivedParams& d) {
  double as2 = d.alpha_star * d.alpha_star;
  double sqe = std::sqrt(d.eps);
  double xi2 = xi * xi;
  double fxi = 0.5 - z + sqe * (d.c * xi - xi * xi2 / (9.0 * as2));
  double fz = d.mu_t + 2.0 * xi * z +
              sqe * (2.0 * xi2 * xi2 / (9.0 * as2) +
                     d.c * (0.5 - 3.0 * xi2 - z));
  return {fxi, fz};
}

std::array<double, 2> rk4_step(const std::array<double, 2>& s,
                               const DerivedParams& d, double dt, Frame frame) {
  auto f = [&](const std::array<double, 2>& u) {
    return frame == Frame::Original ? original_drift(u[0], u[1], d)
                                    : scaled_drift(u[0], u[1], d);
  };
  auto k1 = f(s);
  auto k2 = f({s[0] + 0.5 * dt * k1[0], s[1] + 0.5 * dt * k1[1]});
  auto k3 = f({s[0] + 0.5 * dt * k2[0], s[1] + 0.5 * dt * k2[1]});
  auto k4 = f({s[0] + dt * k3[0], s[1] + dt * k3[1]});
  return {s[0] + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
          s[1] + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
}

namespace {

void check_box(double a, double b, const char* what) {
  if (!(std::abs(a) <= 10.0 && std::abs(b) <= 10.0))
    throw FhnError(ErrorCode::NonFinite, std::string(what) + ": state left [-10,10]^2");
}

Path run_2d(const DerivedParams& d, std::array<double, 2> s, const SimConfig& cfg,
            Frame frame) {
  cfg.validate();
  Path path;
  path.frame = frame;
  long n_steps = static_cast<long>(std::ceil(cfg.t_max / cfg.dt));
  path.times.reserve(static_cast<std::size_t>(n_steps / cfg.record_stride) + 2);
  path.states.reserve(static_cast<std::size_t>(n_steps / cfg.record_stride) + 2);
  path.times.push_back(0.0);
  path.states.push_back(s);
  RngStream rng = make_rng_stream(cfg.seed, 0);
  double sdt = std::sqrt(cfg.dt);
  for (long i = 1; i <= n_steps; ++i) {
    if (cfg.scheme == Scheme::DeterministicRk4) {
      s = rk4_step(s, d, cfg.dt, frame);
    } else {
      double dw1 = sdt * rng.next_normal();
      double dw2 = sdt * rng.next_normal();
      s = frame == Frame::Original
              ? original_em_step(s[0], s[1], d, cfg.dt, dw1, dw2)
              : scaled_em_step(s[0], s[1], d, cfg.dt, dw1, dw2);
    }
    check_box(s[0], s[1], frame == Frame::Original ? "simulate_original" : "simulate_scaled");
    if (i % cfg.record_stride == 0 || i == n_steps) {
      path.times.push_back(i * cfg.dt);
      path.states.push_back(s);
    }
  }
  return path;
}

}  // namespace

Path simulate_original(const ModelParams& p, double x0, double y0,
                       const SimConfig& cfg) {
  DerivedParams d = derive_params(p);
  if (cfg.dt > d.eps / 10.0)
    throw FhnError(ErrorCode::StepTooLarge, "simulate_original: dt > eps/10");
  return run_2d(d, {x0, y0}, cfg, Frame::Original);
}

Path simulate_scaled(const DerivedParams& d, double xi0, double z0,
                     const SimConfig& cfg) {
  if (cfg.dt > 0.01)
    throw FhnError(ErrorCode::StepTooLarge, "simulate_scaled: dt > 0.01");
  return run_2d(d, {xi0, z0}, cfg, Frame::Scaled);
}

Path simulate_linearized(const DerivedParams& d, double z0, double t0,
                         double t1, const SimConfig& cfg) {
  cfg.validate();
  if (!(t0 < t1)) throw FhnError(ErrorCode::ConfigError, "simulate_linearized: t0 >= t1");
  Path path;
  path.frame = Frame::Scaled;
  RngStream rng = make_rng_stream(cfg.seed, 0);
  double sdt = std::sqrt(cfg.dt);
  double z = z0;
  double t = t0;
  path.times.push_back(t);
  path.states.push_back({t, z});
  long i = 0;
  while (t < t1 - 0.5 * cfg.dt) {
    double dw1 = cfg.scheme == Scheme::EulerMaruyama ? sdt * rng.next_normal() : 0.0;
    double dw2 = cfg.scheme == Scheme::EulerMaruyama ? sdt * rng.next_normal() : 0.0;
    z += (d.mu_t + t * z) * cfg.dt - d.sigma1_t * t * dw1 + d.sigma2_t * dw2;
    t = t0 + (++i) * cfg.dt;
    if (!std::isfinite(z))
      throw FhnError(ErrorCode::NonFinite, "simulate_linearized: non-finite state");
    if (i % cfg.record_stride == 0) {
      path.times.push_back(t);
      path.states.push_back({t, z});
    }
  }
  if (path.times.back() != t) {
    path.times.push_back(t);
    path.states.push_back({t, z});
  }
  return path;
}

std::vector<double> linearized_endpoints(const DerivedParams& d, double z0,
                                         double t0, double t1, double dt,
                                         std::uint64_t master_seed,
                                         int n_paths, int n_threads) {
  std::vector<double> out(static_cast<std::size_t>(n_paths));
  if (n_threads <= 0) n_threads = static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  auto worker = [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      RngStream rng = make_rng_stream(master_seed, static_cast<std::uint64_t>(i));
      double sdt = std::sqrt(dt);
      double z = z0;
      double t = t0;
      long k = 0;
      while (t < t1 - 0.5 * dt) {
        double dw1 = sdt * rng.next_normal();
        double dw2 = sdt * rng.next_normal();
        z += (d.mu_t + t * z) * dt - d.sigma1_t * t * dw1 + d.sigma2_t * dw2;
        t = t0 + (++k) * dt;
      }
      out[static_cast<std::size_t>(i)] = z;
    }
  };
  std::vector<std::thread> pool;
  int chunk = (n_paths + n_threads - 1) / n_threads;
  for (int th = 0; th < n_threads; ++th) {
    int lo = th * chunk, hi = std::min(n_paths, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(worker, lo, hi);
  }
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace fhn
