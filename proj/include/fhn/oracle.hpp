#pragma once

#include <functional>

#include "fhn/params.hpp"

namespace fhn {

/// Adaptive Gauss-Kronrod 15(7) quadrature on [a, b], relative target
/// rel_tol. Integrands here are smooth Gaussians; this converges quickly.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12);

/// Standard normal CDF via erfc, clamped away from 0 to avoid underflow.
double normal_cdf(double x);

/// Deterministic reduction of the linearized near-separatrix equation:
///   z0_t = e^(t^2/2) [ z0 e^(-t0^2/2) + mu_t Int_{t0}^{t} e^(-s^2/2) ds ]
double z0_deterministic(double t, double z0, double t0, double mu_t);

/// Gaussian law of the linearized first-hitting variable z^1 at T = 2L,
/// started at z0 at t0 = -2L:
///   mean = z0 + mu_t e^(2L^2) Int e^(-s^2/2) ds
///   var  = e^(4L^2) [ s1t^2 Int s^2 e^(-s^2) ds + s2t^2 Int e^(-s^2) ds ]
struct LinearizedLaw {
  double mean = 0.0;
  double variance = 0.0;
  double L = 0.0;
  double t0 = 0.0;
  double T = 0.0;
  double z0 = 0.0;
  // scale-free pieces used to evaluate tail probabilities without forming
  // e^(2L^2) (kept exact even when 4L^2 is large enough to overflow)
  double drift_integral = 0.0;  // Int e^(-s^2/2)
  double noise_rms = 0.0;       // sqrt(s1t^2 Int s^2 e^(-s^2) + s2t^2 Int e^(-s^2))
  double mu_t = 0.0;
};

LinearizedLaw linearized_law(const DerivedParams& d, double L, double z0);

/// P{ z^1_T <= -H } = Phi( -(H + mean)/sqrt(variance) ), computed from the
/// scale-free pieces so large L never overflows.
double hit_prob_below(const LinearizedLaw& law, double H);

/// zeta(s) = e^(s^2) [ e^(-t0^2) + Int_{t0}^{s} e^(-u^2) du ],  s >= t0.
double zeta(double s, double t0);

}  // namespace fhn
