#pragma once

#include "fhn/errors.hpp"

namespace fhn {

/// User-facing parameters of the stochastic FitzHugh-Nagumo system
///
///   eps * dx = (x - x^3 + y) dt + sqrt(eps) * sigma1 dW1
///        dy = (a - b x - c y) dt + sigma2 dW2
///
/// A b != 1 is folded away at construction time by rescaling time, which
/// maps (a, c, eps, sigma1, sigma2, b) -> (a/b, c/b, eps*b, sigma1,
/// sigma2/sqrt(b), 1).
struct ModelParams {
  double a = 0.0;
  double b = 1.0;
  double c = 0.0;
  double eps = 0.01;
  double sigma1 = 0.0;
  double sigma2 = 0.0;

  /// Equivalent parameter set with b == 1.
  ModelParams normalized() const;
  void validate() const;  // throws FhnError on invariant violation
};

/// Quantities derived from ModelParams: the stationary point, the distance
/// to the singular Hopf bifurcation, and the scaled-frame drift/noise
/// parameters.
struct DerivedParams {
  double a = 0.0, c = 0.0, eps = 0.0;
  double sigma1 = 0.0, sigma2 = 0.0;

  double alpha = 0.0;       // x-coordinate of the stationary point P
  double alpha_star = 0.0;  // sqrt((1 - c*eps)/3), bifurcation location
  double delta = 0.0;       // a - alpha_star - c(alpha_star^3 - alpha_star)
  double mu = 0.0;          // 3 alpha_star delta / sqrt(eps)
  double sigma1_t = 0.0;    // -3 alpha_star eps^(-3/4) sigma1
  double sigma2_t = 0.0;    //  3 alpha_star eps^(-3/4) sigma2
  double mu_t = 0.0;        // mu - sigma1_t^2 (Ito correction)
  double sigma_t = 0.0;     // sqrt(sigma1_t^2 + sigma2_t^2)
};

/// Solves the cubic alpha + c(alpha^3 - alpha) = a and fills in all derived
/// quantities.  With c < 0 and three intersection points, alpha is the
/// middle one.  Throws DegenerateC if |c| >= 1/sqrt(eps), NoRoot if the
/// safeguarded solve fails.
DerivedParams derive_params(const ModelParams& p);

/// Inverse parameterization: given the scaled triple (mu_t, sigma_t, eps)
/// with c = 0 and sigma1 = sigma2, reconstruct the ModelParams that derive
/// to it (sigma_t here follows sigma_t^2 = sigma1_t^2 + sigma2_t^2).
ModelParams params_from_scaled(double mu_t, double sigma_t, double eps);

/// Same inversion but prescribing the per-component noise values
/// |sigma1_t| = sigma2_t = sigma_comp directly.
ModelParams params_from_scaled_components(double mu_t, double sigma_comp,
                                          double eps);

}  // namespace fhn
