#include "fhn/transforms.hpp"

#include <cmath>

#include "fhn/errors.hpp"

namespace fhn {

double first_integral(double xi, double z) {
  return 2.0 * z * std::exp(-2.0 * z - 2.0 * xi * xi + 1.0);
}

double q_drift(double xi, double z, const DerivedParams& d) {
  double as2 = d.alpha_star * d.alpha_star;
  double xi2 = xi * xi;
  double bracket = 2.0 * d.mu * (1.0 - 2.0 * z) +
                   std::sqrt(d.eps) *
                       ((4.0 / (9.0 * as2)) * xi2 * xi2 +
                        d.c * (4.0 * z * xi2 - 6.0 * xi2 + 4.0 * z * z - 4.0 * z + 1.0));
  return bracket * std::exp(-2.0 * z - 2.0 * xi2 + 1.0);
}

namespace {

constexpr double kSeriesCut = 1e-4;

double f_series(double u) {
  // f = 2u + 4/3 u^2 + 2/9 u^3 - 8/135 u^4 + ...
  return u * (2.0 + u * (4.0 / 3.0 + u * (2.0 / 9.0 - u * 8.0 / 135.0)));
}

}  // namespace

double implicit_f(double u) {
  if (!std::isfinite(u)) throw FhnError(ErrorCode::OutOfDomain, "implicit_f: u not finite");
  if (std::abs(u) < kSeriesCut) return f_series(u);

  double target = -2.0 * u * u;
  auto g = [&](double f) { return std::log1p(f) - f - target; };
  double lo, hi;
  if (u > 0.0) {
    // f in [2u, ...): expand upper end until sign change
    lo = 2.0 * u;
    hi = 2.0 * u + 2.0 * u * u + 1.0;
    int guard = 0;
    while (g(hi) > 0.0 && ++guard < 200) hi = 2.0 * hi + 1.0;
    if (guard >= 200)
      throw FhnError(ErrorCode::ConvergenceFailure, "implicit_f: bracket expansion failed");
  } else {
    // f in (-1, 0); g(-1+) = -inf, g(0) = 2u^2 > 0
    lo = std::nextafter(-1.0, 0.0);
    hi = 0.0;
    // sharpen the left end using the asymptotic f ~ -1 + e^(-1-2u^2)
    double guess = -1.0 + std::exp(-1.0 + target);
    if (g(guess) < 0.0) lo = guess;
  }
  // bisection-bracketed Newton, 100 iterations, 1e-12 tolerance
  double flo = g(lo);
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    double gx = g(x);
    if (gx == 0.0) return x;
    if (gx * flo < 0.0) {
      hi = x;
    } else {
      lo = x;
      flo = gx;
    }
    double dgx = -x / (1.0 + x);  // d/df [log(1+f) - f]
    double xn = (dgx != 0.0) ? x - gx / dgx : 0.5 * (lo + hi);
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (std::abs(xn - x) <= 1e-12 * std::max(1.0, std::abs(xn))) return xn;
    x = xn;
  }
  return x;
}

FDerivatives f_derivatives(double u) {
  FDerivatives r;
  if (std::abs(u) < kSeriesCut) {
    r.d1 = 2.0 + u * (8.0 / 3.0 + u * (2.0 / 3.0 - u * 32.0 / 135.0));
    r.d2 = 8.0 / 3.0 + u * (4.0 / 3.0 - u * 32.0 / 45.0);
    return r;
  }
  double f = implicit_f(u);
  double ratio = (1.0 + f) / f;
  r.d1 = 4.0 * u * ratio;
  r.d2 = 4.0 * ratio * (1.0 - 4.0 * u * u / (f * f));
  return r;
}

AngleState to_angle(double xi, double z) {
  if (!(z > 0.0)) throw FhnError(ErrorCode::OutOfDomain, "to_angle: requires z > 0");
  double Q = first_integral(xi, z);
  if (!(Q > 0.0) || Q > 1.0 + 1e-14)
    throw FhnError(ErrorCode::OutOfDomain, "to_angle: Q outside (0, 1]");
  if (Q >= 1.0) return AngleState{1.0, 0.0};  // center: angle degenerates
  // invert z = (1 + f(X))/2 in closed form via the defining relation of f
  double F = 2.0 * z - 1.0;
  double X2 = (F - std::log1p(F)) / 2.0;
  double X = (F >= 0.0 ? 1.0 : -1.0) * std::sqrt(std::max(X2, 0.0));
  return AngleState{Q, std::atan2(-xi, X)};
}

std::array<double, 2> from_angle(const AngleState& s) {
  if (!(s.Q > 0.0 && s.Q <= 1.0))
    throw FhnError(ErrorCode::OutOfDomain, "from_angle: Q outside (0, 1]");
  double R = std::sqrt(-std::log(s.Q) / 2.0);
  double xi = -R * std::sin(s.phi);
  double z = 0.5 * (1.0 + implicit_f(R * std::cos(s.phi)));
  return {xi, z};
}

std::array<double, 2> original_to_scaled(double x, double y, const DerivedParams& d) {
  double as = d.alpha_star;
  double sqe = std::sqrt(d.eps);
  double u = x - as;
  double v = y - (as * as * as - as);
  double xi2 = u / sqe;
  double eta = v / d.eps;
  double z3 = eta - 3.0 * as * xi2 * xi2 + 1.0 / (6.0 * as);
  return {-3.0 * as * xi2, 3.0 * as * z3};
}

std::array<double, 2> scaled_to_original(double xi, double z, const DerivedParams& d) {
  double as = d.alpha_star;
  double sqe = std::sqrt(d.eps);
  double xi2 = -xi / (3.0 * as);
  double z3 = z / (3.0 * as);
  double eta = z3 + 3.0 * as * xi2 * xi2 - 1.0 / (6.0 * as);
  double u = sqe * xi2;
  double v = d.eps * eta;
  return {as + u, (as * as * as - as) + v};
}

double rho_bound(double Q, double phi) {
  double cp = std::cos(phi);
  if (cp >= 0.0) return std::sqrt(std::abs(std::log(Q)));
  return std::pow(Q, -cp * cp);
}

AngleSdeCoeffs angle_sde_coeffs(const AngleState& s, const DerivedParams& d) {
  if (!(s.Q > 0.0 && s.Q < 1.0))
    throw FhnError(ErrorCode::OutOfDomain, "angle_sde_coeffs: Q outside (0, 1)");
  double logQ = std::log(s.Q);
  double R = std::sqrt(-logQ / 2.0);
  double cp = std::cos(s.phi), sp = std::sin(s.phi);
  double X = R * cp;
  double fX = implicit_f(X);
  double one_pf = 1.0 + fX;

  // f(X)/X with the removable singularity at X = 0 handled by series
  double f_over_X;
  if (std::abs(X) < kSeriesCut) {
    f_over_X = 2.0 + X * (4.0 / 3.0 + X * (2.0 / 9.0));
  } else {
    f_over_X = fX / X;
  }

  AngleSdeCoeffs out;
  out.f1_lead = -2.0 * s.Q * fX / one_pf;
  out.f2_lead = 0.5 * f_over_X;

  double sr1 = (d.sigma_t > 0.0) ? d.sigma1_t / d.sigma_t : 0.0;
  double sr2 = (d.sigma_t > 0.0) ? d.sigma2_t / d.sigma_t : 0.0;
  // dQ row: (-2 sigma1_t xi Q / z, sigma2_t Q (1-2z)/z) rewritten in (Q, phi)
  out.psi1[0] = sr1 * 2.0 * std::sqrt(2.0) * s.Q * std::sqrt(-logQ) * sp / one_pf;
  out.psi1[1] = -sr2 * 2.0 * s.Q * fX / one_pf;
  // dphi row, written so the cos(phi) -> 0 limit is explicit
  out.psi2[0] = -sr1 * (f_over_X + cp / R) / one_pf;
  out.psi2[1] = sr2 * f_over_X * R * sp / (logQ * one_pf);
  return out;
}

}  // namespace fhn
