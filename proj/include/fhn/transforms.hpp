#pragma once

#include <array>

#include "fhn/params.hpp"

namespace fhn {

/// Action-angle style coordinates built on the first integral Q and a
/// lifted angle phi around the stationary point of the scaled frame.
struct AngleState {
  double Q = 0.0;
  double phi = 0.0;
};

/// First integral of the eps = mu = 0 scaled flow:
///   Q(xi, z) = 2 z exp(-2z - 2 xi^2 + 1)
/// Q in (0,1] on the upper half plane, Q = 1 at the center (0, 1/2),
/// Q = 0 on the separatrix z = 0.
double first_integral(double xi, double z);

/// Time derivative of Q along the deterministic scaled flow at (xi, z),
/// using d.mu as the drift parameter:
///   dQ/dt = [2 mu (1-2z)
///            + sqrt(eps) ( (4/(9 a*^2)) xi^4
///                          + c (4 z xi^2 - 6 xi^2 + 4 z^2 - 4 z + 1) )]
///           * exp(-2z - 2 xi^2 + 1)
/// The c-bracket follows from differentiating Q along the flow; it is
/// checked against finite differences in the tests.
double q_drift(double xi, double z, const DerivedParams& d);

/// The implicit function f: R -> (-1, inf) solving
///   log(1 + f(u)) - f(u) = -2 u^2,  sign f(u) = sign u.
/// Accurate to ~1e-12 relative; safeguarded Newton with a series branch
/// near u = 0.
double implicit_f(double u);

/// f'(u) = 4u (1 + f)/f and f''(u) = 4 (1+f)/f (1 - 4u^2/f^2), with the
/// removable singularity at u = 0 handled by series (f'(0) = 2,
/// f''(0) = 8/3).
struct FDerivatives {
  double d1 = 0.0;
  double d2 = 0.0;
};
FDerivatives f_derivatives(double u);

/// (xi, z) -> (Q, phi) for z > 0 with Q in (0,1]; phi in (-pi, pi].
/// At Q = 1 the angle degenerates and phi = 0 is returned by convention.
AngleState to_angle(double xi, double z);

/// (Q, phi) -> (xi, z) for Q in (0,1]:
///   xi = -sqrt(-log Q / 2) sin(phi),  z = (1 + f(sqrt(-log Q/2) cos phi))/2
std::array<double, 2> from_angle(const AngleState& s);

/// Exact four-step coordinate chain between the original (x, y) frame and
/// the scaled (xi, z) frame. Time units differ by sqrt(eps); these maps
/// handle space only.
std::array<double, 2> original_to_scaled(double x, double y, const DerivedParams& d);
std::array<double, 2> scaled_to_original(double xi, double z, const DerivedParams& d);

/// Leading-order drift factors and exact diffusion rows of the (Q, phi)
/// SDE. Drifts: dQ = mu_t * f1_lead dt + ..., dphi = f2_lead dt + ...,
/// with the bounded-but-not-closed-form remainders set to zero.  Diffusion
/// rows are normalized so that dQ = ... + sigma_t * psi1 . dW and
/// dphi = ... + sigma_t * psi2 . dW.
struct AngleSdeCoeffs {
  double f1_lead = 0.0;
  double f2_lead = 0.0;
  std::array<double, 2> psi1{0.0, 0.0};
  std::array<double, 2> psi2{0.0, 0.0};
};
AngleSdeCoeffs angle_sde_coeffs(const AngleState& s, const DerivedParams& d);

/// rho(Q, phi) from the remainder bounds: sqrt(|log Q|) for cos(phi) >= 0,
/// Q^(-cos^2 phi) otherwise.
double rho_bound(double Q, double phi);

}  // namespace fhn
