#include "fhn/oracle.hpp"

#include <cmath>
#include <limits>

#include "fhn/errors.hpp"

namespace fhn {

namespace {

// Gauss-Kronrod 15-point nodes/weights (abscissae for [-1, 1]), with the
// embedded 7-point Gauss rule on the odd indices.
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct GkResult {
  double value;
  double err;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fc = f(c);
  double resk = kWgk[7] * fc;
  double resg = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    double x = h * kXgk[j];
    double f1 = f(c - x), f2 = f(c + x);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  double value = resk * h;
  double err = std::abs((resk - resg) * h);
  return {value, err};
}

double integrate_rec(const std::function<double(double)>& f, double a, double b,
                     double tol, int depth) {
  GkResult r = gk15(f, a, b);
  if (r.err <= tol || depth >= 40) return r.value;
  double m = 0.5 * (a + b);
  return integrate_rec(f, a, m, 0.5 * tol, depth + 1) +
         integrate_rec(f, m, b, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
  if (a == b) return 0.0;
  GkResult first = gk15(f, a, b);
  double scale = std::max(std::abs(first.value), 1e-300);
  if (first.err <= rel_tol * scale) return first.value;
  return integrate_rec(f, a, b, rel_tol * scale, 0);
}

double normal_cdf(double x) {
  double p = 0.5 * std::erfc(-x / std::sqrt(2.0));
  if (p < 1e-300) p = 1e-300;
  if (p > 1.0) p = 1.0;
  return p;
}

double z0_deterministic(double t, double z0, double t0, double mu_t) {
  auto kern = [](double s) { return std::exp(-0.5 * s * s); };
  double integral = (t >= t0) ? integrate(kern, t0, t) : -integrate(kern, t, t0);
  double expo = 0.5 * t * t;
  if (expo > 500.0) {
    // log-space assembly of e^(t^2/2) * [...]
    double inner = z0 * std::exp(-0.5 * t0 * t0) + mu_t * integral;
    double sign = inner >= 0.0 ? 1.0 : -1.0;
    return sign * std::exp(expo + std::log(std::abs(inner) + 1e-300));
  }
  return std::exp(expo) * (z0 * std::exp(-0.5 * t0 * t0) + mu_t * integral);
}

LinearizedLaw linearized_law(const DerivedParams& d, double L, double z0) {
  if (!(L > 0.0)) throw FhnError(ErrorCode::OutOfDomain, "linearized_law: L must be > 0");
  LinearizedLaw law;
  law.L = L;
  law.t0 = -2.0 * L;
  law.T = 2.0 * L;
  law.z0 = z0;
  law.mu_t = d.mu_t;
  auto g1 = [](double s) { return std::exp(-0.5 * s * s); };
  auto g2 = [](double s) { return s * s * std::exp(-s * s); };
  auto g3 = [](double s) { return std::exp(-s * s); };
  double i1 = integrate(g1, law.t0, law.T);
  double i2 = integrate(g2, law.t0, law.T);
  double i3 = integrate(g3, law.t0, law.T);
  law.drift_integral = i1;
  double s1 = d.sigma1_t, s2 = d.sigma2_t;
  law.noise_rms = std::sqrt(s1 * s1 * i2 + s2 * s2 * i3);
  double e2 = 2.0 * L * L;
  law.mean = (e2 > 500.0) ? std::numeric_limits<double>::infinity()
                          : z0 + d.mu_t * std::exp(e2) * i1;
  law.variance = (2.0 * e2 > 700.0)
                     ? std::numeric_limits<double>::infinity()
                     : std::exp(2.0 * e2) * law.noise_rms * law.noise_rms;
  return law;
}

double hit_prob_below(const LinearizedLaw& law, double H) {
  if (!(law.noise_rms > 0.0))
    throw FhnError(ErrorCode::OutOfDomain, "hit_prob_below: zero variance");
  // -(H + mean)/sd with the common e^(2L^2) factored out of mean and sd
  double e2 = 2.0 * law.L * law.L;
  double arg = -((H + law.z0) * std::exp(-e2) + law.mu_t * law.drift_integral) /
               law.noise_rms;
  return normal_cdf(arg);
}

double zeta(double s, double t0) {
  if (s < t0) throw FhnError(ErrorCode::OutOfDomain, "zeta: requires s >= t0");
  auto g = [](double u) { return std::exp(-u * u); };
  double integral = integrate(g, t0, s);
  double expo = s * s;
  if (expo > 500.0) {
    double inner = std::exp(-t0 * t0) + integral;
    return std::exp(expo + std::log(inner));
  }
  return std::exp(expo) * (std::exp(-t0 * t0) + integral);
}

}  // namespace fhn
