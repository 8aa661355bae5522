#include "covert/gaussian.hpp"

#include <cmath>

namespace covert {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;
}  // namespace

double q_function(double x) { return 0.5 * std::erfc(x / kSqrt2); }

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double q_inverse(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("q_inverse requires p in (0,1)");
  if (p == 0.5) return 0.0;
  // Work on the small-tail side, flip at the end.
  const bool flip = p > 0.5;
  const double pt = flip ? 1.0 - p : p;
  // Abramowitz & Stegun 26.2.23 initial guess, then Newton on Q(x) = pt.
  const double t = std::sqrt(-2.0 * std::log(pt));
  double x = t - (2.30753 + 0.27061 * t) / (1.0 + 0.99229 * t + 0.04481 * t * t);
  for (int it = 0; it < 100; ++it) {
    const double err = q_function(x) - pt;
    const double step = err / normal_pdf(x);
    x += step;
    if (std::abs(step) <= 1e-12 * std::max(1.0, std::abs(x))) break;
  }
  return flip ? -x : x;
}

GaussianMoments GaussianMoments::iid(double mu, double var, double t_abs, std::uint64_t n) {
  const double dn = static_cast<double>(n);
  return GaussianMoments{mu * dn, var * dn, t_abs * dn};
}

double berry_esseen_bound(const GaussianMoments& m) {
  if (!(m.variance > 0.0)) throw DegenerateVariance("total variance must be positive");
  return 6.0 * m.third_abs_central / std::pow(m.variance, 1.5);
}

namespace {

// Series and continued-fraction evaluation of P(a, x), Numerical-Recipes style.
double gamma_series(double a, double x) {
  const double gln = std::lgamma(a);
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - gln);
}

double gamma_cf(double a, double x) {
  const double gln = std::lgamma(a);
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - gln) * h;  // this is Q(a,x)
}

}  // namespace

double regularized_gamma_lower(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw DomainError("regularized_gamma_lower needs x >= 0, a > 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_series(a, x);
  return 1.0 - gamma_cf(a, x);
}

double chi_squared_sf(double statistic, int dof) {
  if (dof <= 0) throw DomainError("dof must be positive");
  if (statistic <= 0.0) return 1.0;
  return 1.0 - regularized_gamma_lower(0.5 * dof, 0.5 * statistic);
}

}  // namespace covert
