#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fhn/params.hpp"
#include "fhn/rng.hpp"

namespace fhn {

enum class Frame { Original, Scaled };
enum class Scheme { EulerMaruyama, DeterministicRk4 };

struct SimConfig {
  double dt = 1e-4;          // scaled-time units unless frame == Original
  double t_max = 100.0;
  std::uint64_t seed = 0;
  Frame frame = Frame::Scaled;
  Scheme scheme = Scheme::EulerMaruyama;
  /// Record every nth step into the Path (1 = all steps).
  int record_stride = 1;

  void validate() const;
};

struct PathEvent {
  double t = 0.0;
  std::string label;
};

struct Path {
  std::vector<double> times;
  std::vector<std::array<double, 2>> states;
  Frame frame = Frame::Scaled;
  std::vector<PathEvent> events;
};

/// Euler-Maruyama (or RK4 when deterministic) integration of the original
/// system
///   dx = (1/eps)(x - x^3 + y) dt + (sigma1/sqrt(eps)) dW1
///   dy = (a - x - c y) dt + sigma2 dW2
/// Requires dt <= eps/10.  Throws NonFinite if the state leaves [-10,10]^2.
Path simulate_original(const ModelParams& p, double x0, double y0,
                       const SimConfig& cfg);

/// Integration of the scaled system (the exact image of the original one):
///   dxi = [1/2 - z + sqrt(eps)(c xi - xi^3/(9 a*^2))] dt + s1t dW1
///   dz  = [mu_t + 2 xi z + sqrt(eps)(2 xi^4/(9 a*^2)
///          + c(1/2 - 3 xi^2 - z))] dt - 2 s1t xi dW1 + s2t dW2
/// Requires dt <= 0.01.
Path simulate_scaled(const DerivedParams& d, double xi0, double z0,
                     const SimConfig& cfg);

/// Scalar time-inhomogeneous linearization near the separatrix:
///   dz1 = (mu_t + t z1) dt - s1t t dW1 + s2t dW2,  t in [t0, t1].
Path simulate_linearized(const DerivedParams& d, double z0, double t0,
                         double t1, const SimConfig& cfg);

/// Endpoints of an ensemble of simulate_linearized runs (stream i of the
/// master seed drives path i); used by the Monte-Carlo oracle checks.
std::vector<double> linearized_endpoints(const DerivedParams& d, double z0,
                                         double t0, double t1, double dt,
                                         std::uint64_t master_seed,
                                         int n_paths, int n_threads = 0);

/// One Euler-Maruyama step of the scaled system. Exposed for the
/// event-driven machinery in the poincare module.
std::array<double, 2> scaled_drift(double xi, double z, const DerivedParams& d);
std::array<double, 2> original_drift(double x, double y, const DerivedParams& d);

inline std::array<double, 2> scaled_em_step(double xi, double z,
                                            const DerivedParams& d, double dt,
                                            double dw1, double dw2) {
  auto f = scaled_drift(xi, z, d);
  return {xi + f[0] * dt + d.sigma1_t * dw1,
          z + f[1] * dt - 2.0 * d.sigma1_t * xi * dw1 + d.sigma2_t * dw2};
}

inline std::array<double, 2> original_em_step(double x, double y,
                                              const DerivedParams& d, double dt,
                                              double dw1, double dw2) {
  auto f = original_drift(x, y, d);
  return {x + f[0] * dt + d.sigma1 / std::sqrt(d.eps) * dw1,
          y + f[1] * dt + d.sigma2 * dw2};
}

/// Classical RK4 step for the deterministic part in either frame.
std::array<double, 2> rk4_step(const std::array<double, 2>& s,
                               const DerivedParams& d, double dt, Frame frame);

}  // namespace fhn
