#include "fhn/params.hpp"

#include <cmath>
#include <limits>

namespace fhn {

namespace {

// Safeguarded Newton on g(alpha) = alpha + c*(alpha^3 - alpha) - a over a
// sign-changing bracket [lo, hi].
double bracketed_newton(double c, double a, double lo, double hi) {
  auto g = [&](double x) { return x + c * (x * x * x - x) - a; };
  auto dg = [&](double x) { return 1.0 + c * (3.0 * x * x - 1.0); };
  double flo = g(lo), fhi = g(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) throw FhnError(ErrorCode::NoRoot, "cubic solve: no sign change in bracket");
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    double fx = g(x);
    if (std::abs(fx) < 1e-15 * (1.0 + std::abs(a))) return x;
    if (fx * flo < 0.0) {
      hi = x;
    } else {
      lo = x;
      flo = fx;
    }
    double d = dg(x);
    double xn = (d != 0.0) ? x - fx / d : 0.5 * (lo + hi);
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (std::abs(xn - x) < 1e-12 * (1.0 + std::abs(xn))) return xn;
    x = xn;
  }
  return x;
}

}  // namespace

ModelParams ModelParams::normalized() const {
  validate();
  if (b == 1.0) return *this;
  ModelParams q;
  q.a = a / b;
  q.b = 1.0;
  q.c = c / b;
  q.eps = eps * b;
  q.sigma1 = sigma1;
  q.sigma2 = sigma2 / std::sqrt(b);
  return q;
}

void ModelParams::validate() const {
  if (!(eps > 0.0)) throw FhnError(ErrorCode::ConfigError, "eps must be > 0");
  if (!(b > 0.0)) throw FhnError(ErrorCode::ConfigError, "b must be > 0");
  if (sigma1 < 0.0 || sigma2 < 0.0)
    throw FhnError(ErrorCode::ConfigError, "noise intensities must be >= 0");
}

DerivedParams derive_params(const ModelParams& p_in) {
  ModelParams p = p_in.normalized();
  if (std::abs(p.c) >= 1.0 / std::sqrt(p.eps))
    throw FhnError(ErrorCode::DegenerateC,
                   "|c| >= 1/sqrt(eps): eigenvalues at alpha_star not imaginary");

  DerivedParams d;
  d.a = p.a;
  d.c = p.c;
  d.eps = p.eps;
  d.sigma1 = p.sigma1;
  d.sigma2 = p.sigma2;

  if (p.c == 0.0) {
    d.alpha = p.a;
  } else if (p.c < 0.0) {
    // g is increasing exactly on [-ac, ac]; the middle intersection point
    // (when there are three) lies there.
    double ac = std::sqrt((1.0 - p.c) / (-3.0 * p.c));
    double glo = -ac + p.c * (-ac * ac * ac + ac) - p.a;
    double ghi = ac + p.c * (ac * ac * ac - ac) - p.a;
    if (glo * ghi <= 0.0) {
      d.alpha = bracketed_newton(p.c, p.a, -ac, ac);
    } else {
      // single intersection on one of the outer monotone pieces
      double lo = glo > 0.0 ? -ac : ac;
      double step = glo > 0.0 ? -1.0 : 1.0;
      double hi = lo + step;
      auto g = [&](double x) { return x + p.c * (x * x * x - x) - p.a; };
      int guard = 0;
      while (g(lo) * g(hi) > 0.0 && ++guard < 200) hi += step;
      if (guard >= 200) throw FhnError(ErrorCode::NoRoot, "cubic solve: bracket expansion failed");
      d.alpha = bracketed_newton(p.c, p.a, std::min(lo, hi), std::max(lo, hi));
    }
  } else {
    // c in (0, 1/sqrt(eps)); expand a bracket around a
    double lo = p.a, hi = p.a;
    double w = std::max(1.0, std::abs(p.a));
    auto g = [&](double x) { return x + p.c * (x * x * x - x) - p.a; };
    int guard = 0;
    while (g(lo) > 0.0 && ++guard < 200) lo -= w;
    guard = 0;
    while (g(hi) < 0.0 && ++guard < 200) hi += w;
    d.alpha = bracketed_newton(p.c, p.a, lo, hi);
  }

  d.alpha_star = std::sqrt((1.0 - p.c * p.eps) / 3.0);
  double as = d.alpha_star;
  d.delta = p.a - as - p.c * (as * as * as - as);
  double sqe = std::sqrt(p.eps);
  d.mu = 3.0 * as * d.delta / sqe;
  double s = 3.0 * as * std::pow(p.eps, -0.75);
  d.sigma1_t = -s * p.sigma1;
  d.sigma2_t = s * p.sigma2;
  d.mu_t = d.mu - d.sigma1_t * d.sigma1_t;
  d.sigma_t = std::hypot(d.sigma1_t, d.sigma2_t);
  return d;
}

ModelParams params_from_scaled(double mu_t, double sigma_t, double eps) {
  return params_from_scaled_components(mu_t, sigma_t / std::sqrt(2.0), eps);
}

ModelParams params_from_scaled_components(double mu_t, double sigma_comp,
                                          double eps) {
  if (!(eps > 0.0)) throw FhnError(ErrorCode::ConfigError, "eps must be > 0");
  if (sigma_comp < 0.0)
    throw FhnError(ErrorCode::ConfigError, "noise intensity must be >= 0");
  double as = std::sqrt(1.0 / 3.0);  // c = 0
  double s = 3.0 * as * std::pow(eps, -0.75);
  ModelParams p;
  p.c = 0.0;
  p.b = 1.0;
  p.eps = eps;
  p.sigma1 = sigma_comp / s;
  p.sigma2 = sigma_comp / s;
  double mu = mu_t + sigma_comp * sigma_comp;  // undo Ito correction
  double delta = mu * std::sqrt(eps) / (3.0 * as);
  p.a = as + delta;  // c = 0: delta = a - alpha_star
  return p;
}

}  // namespace fhn
