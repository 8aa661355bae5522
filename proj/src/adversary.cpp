#include "covert/adversary.hpp"

#include <algorithm>
#include <cmath>

#include "covert/gaussian.hpp"

namespace covert {

namespace {
constexpr double kSqrt2Pi = 2.5066282746310002;
}

DetectorConstants detector_constants(const BinaryInputDmc& willie) {
  const ScoreA score = ScoreA::from(willie);
  DetectorConstants d;
  for (std::size_t z = 0; z < willie.output_size(); ++z) {
    d.mu0 += willie.off.prob(z) * score.values[z];
    d.mu1 += willie.on.prob(z) * score.values[z];
  }
  double var0 = 0, var1 = 0;
  for (std::size_t z = 0; z < willie.output_size(); ++z) {
    const double a = score.values[z];
    var0 += willie.off.prob(z) * (a - d.mu0) * (a - d.mu0);
    var1 += willie.on.prob(z) * (a - d.mu1) * (a - d.mu1);
    d.t0 += willie.off.prob(z) * std::pow(std::abs(a - d.mu0), 3);
    d.t1 += willie.on.prob(z) * std::pow(std::abs(a - d.mu1), 3);
  }
  d.sigma0 = std::sqrt(var0);
  d.sigma1 = std::sqrt(var1);
  if (!(d.sigma0 > 0.0)) throw DegenerateVariance("detector score has zero variance under Q0");
  d.b0 = 6.0 * d.t0 / std::pow(d.sigma0, 3);
  const double min_var = std::min(var0, var1 > 0.0 ? var1 : var0);
  d.b1 = 6.0 * std::max(d.t0, d.t1) / std::pow(min_var, 1.5);
  d.b2 = d.sigma1 > d.sigma0
             ? d.sigma1 * (var1 - var0) / (2.0 * std::pow(d.sigma0, 3))
             : 0.0;
  d.b3 = (d.mu1 - d.mu0) * d.b2 / (2.0 * kSqrt2Pi * d.sigma0);
  d.formulas = {
      {"B0 = 6 t0 / sigma0^3", d.b0},
      {"B1 = 6 max(t0,t1) / min(sigma0^2,sigma1^2)^{3/2}", d.b1},
      {"B2 = sigma1 (sigma1^2 - sigma0^2) / (2 sigma0^3) [0 if sigma1 <= sigma0]", d.b2},
      {"B3 = (mu1 - mu0) B2 / (2 sqrt(2 pi) sigma0)", d.b3},
  };
  return d;
}

bool detector_decide(const DetectorSpec& spec, std::span<const int> z) {
  double sum = 0.0;
  for (const int zi : z) sum += spec.score.values[static_cast<std::size_t>(zi)];
  return sum > spec.tau;
}

SumDistribution detector_statistic_law(std::int64_t n, std::int64_t w,
                                       const BinaryInputDmc& willie, std::size_t cap) {
  if (w < 0 || w > n) throw InvalidParams("weight must lie in [0, n]");
  const ScoreA score = ScoreA::from(willie);
  const SumDistribution off =
      iid_sum_distribution(score.values, willie.off, static_cast<std::uint64_t>(n - w), cap);
  if (w == 0) return off;
  const SumDistribution on =
      iid_sum_distribution(score.values, willie.on, static_cast<std::uint64_t>(w), cap);
  return off.convolve(on, cap);
}

RocPair detector_roc(std::int64_t n, std::int64_t w_min, const BinaryInputDmc& willie, double tau,
                     std::size_t cap) {
  if (w_min < 1 || w_min > n) throw InvalidParams("need 0 < w_min <= n");
  const DetectorConstants d = detector_constants(willie);
  const double dn = static_cast<double>(n);
  const double dw = static_cast<double>(w_min);

  RocPair out;
  const SumDistribution null_law = detector_statistic_law(n, 0, willie, cap);
  const SumDistribution alt_law = detector_statistic_law(n, w_min, willie, cap);
  out.exact.false_alarm = null_law.tail_gt(tau);
  out.exact.missed_detection = alt_law.cdf(tau);

  out.bound.false_alarm =
      q_function((tau - dn * d.mu0) / (std::sqrt(dn) * d.sigma0)) + d.b0 / std::sqrt(dn);
  const double alt_var = dn * d.sigma0 * d.sigma0 +
                         dw * (d.sigma1 * d.sigma1 - d.sigma0 * d.sigma0);
  out.bound.missed_detection =
      q_function((-tau + dn * d.mu0 + dw * (d.mu1 - d.mu0)) / std::sqrt(alt_var)) +
      d.b1 / std::sqrt(dn);
  return out;
}

double tv_lower_bound_from_wmin(std::int64_t n, std::int64_t w_min,
                                const BinaryInputDmc& willie) {
  const DetectorConstants d = detector_constants(willie);
  double chi2 = 0.0;
  for (std::size_t z = 0; z < willie.output_size(); ++z) {
    const double diff = willie.on.prob(z) - willie.off.prob(z);
    if (willie.off.prob(z) > 0.0) chi2 += diff * diff / willie.off.prob(z);
  }
  const double dn = static_cast<double>(n);
  const double dw = static_cast<double>(w_min);
  return 1.0 - 2.0 * q_function(dw * std::sqrt(chi2) / (2.0 * std::sqrt(dn))) -
         (d.b0 + d.b1) / std::sqrt(dn) - dw * dw * d.b3 / std::pow(dn, 1.5);
}

double beta_upper_bound_from_wmin(std::int64_t n, std::int64_t w_min, double alpha,
                                  const BinaryInputDmc& willie) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
  const DetectorConstants d = detector_constants(willie);
  double chi2 = 0.0;
  for (std::size_t z = 0; z < willie.output_size(); ++z) {
    const double diff = willie.on.prob(z) - willie.off.prob(z);
    if (willie.off.prob(z) > 0.0) chi2 += diff * diff / willie.off.prob(z);
  }
  const double dn = static_cast<double>(n);
  const double dw = static_cast<double>(w_min);
  const double q_inv_alpha = q_inverse(alpha);
  if (!(dw > std::sqrt(dn) * q_inv_alpha / std::sqrt(chi2))) {
    throw PreconditionViolation("w_min must exceed sqrt(n) Q^{-1}(alpha)/sqrt(chi2)");
  }
  // The false-alarm calibration shifts Q^{-1}(alpha) by at most B0/sqrt(n);
  // its first-order effect enters through the Q^{-1} sensitivity at alpha.
  const double fa_sensitivity = d.b0 * kSqrt2Pi * std::exp(0.5 * q_inv_alpha * q_inv_alpha);
  return q_function(dw * std::sqrt(chi2 / dn) - q_inv_alpha) +
         (d.b1 + fa_sensitivity) / std::sqrt(dn) + dw * dw * d.b3 / std::pow(dn, 1.5);
}

ConverseValue converse_logM_from_weight(double w, double eps, const ChannelConstants& c,
                                        double n) {
  if (!(w >= 1.0)) throw InfeasibleWeight("weight must be at least 1");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("epsilon must lie in (0,1)");
  (void)n;
  const double be = 6.0 * c.t_p / std::pow(c.v_p, 1.5);  // per-summand BE constant
  const double corrected_arg = 1.0 - eps - 2.0 * be / std::sqrt(w);
  ConverseValue out;
  out.band_scale = 1.0;
  out.be_corrected = corrected_arg > 0.0 && corrected_arg < 1.0;
  const double q_arg = out.be_corrected ? corrected_arg : 1.0 - eps;
  out.point = w * c.d_p + std::sqrt(w * c.v_p) * q_inverse(q_arg) -
              std::log(be / std::sqrt(w));
  return out;
}

namespace {

// Third-derivative bound of mu -> D((1-mu)Q0 + mu Q1 || Q0) on [0, 1/2]:
// |f'''| <= sum |Q1-Q0|^3 (2/Q0)^2, so B_kl = (2/3) sum |Q1-Q0|^3 / Q0^2.
double kl_cubic_constant(const ChannelConstants& c, const DetectorConstants& d) {
  // Assembled from the detector score: |Q1-Q0|^3/Q0^2 = |A|^3 Q0, so
  // sum |Q1-Q0|^3/Q0^2 = E_Q0 |A|^3 = t0 (mu0 = 0).
  (void)c;
  return (2.0 / 3.0) * d.t0;
}

}  // namespace

double weight_bound_D(double delta, double n, const ChannelConstants& c,
                      const DetectorConstants& d) {
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  const double g = std::sqrt(2.0 * delta / c.chi2_q);
  const double b = 2.0 * kl_cubic_constant(c, d) * std::pow(2.0 * delta / c.chi2_q, 1.5) / delta;
  return (b / std::sqrt(n) + 1.0) * g;
}

double weight_bound_V(double delta, double n, double gamma, const ChannelConstants& c,
                      const DetectorConstants& d) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in [0,1]");
  const double cc = d.b0 + d.b1 + d.b3;
  const double arg = 0.5 * (1.0 - delta) - cc / std::sqrt(n) - gamma;
  if (!(arg > 0.0 && arg < 1.0)) throw DomainError("Q^{-1} argument outside (0,1)");
  return 2.0 / std::sqrt(c.chi2_q) * q_inverse(arg);
}

double weight_bound_beta(double delta, double alpha, double n, double gamma,
                         const ChannelConstants& c, const DetectorConstants& d) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in [0,1]");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
  const double cc = d.b0 + d.b1 + d.b3;
  const double arg = 1.0 - alpha - delta - cc / std::sqrt(n) - gamma;
  if (!(arg > 0.0 && arg < 1.0)) throw DomainError("Q^{-1} argument outside (0,1)");
  return (q_inverse(arg) + q_inverse(alpha)) / std::sqrt(c.chi2_q);
}

ConverseValue converse_secondorder(CovertMetric metric, double n, double eps, double delta,
                                   double alpha, const ChannelConstants& c,
                                   const DetectorConstants& d) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("epsilon must lie in (0,1)");
  double g = 0.0;
  double c_disp = 0.0;  // the additive C of w <= g sqrt(n) + C
  const double cc = d.b0 + d.b1 + d.b3;
  switch (metric) {
    case CovertMetric::KL: {
      if (!(delta > 0.0)) throw DomainError("delta must be positive");
      g = std::sqrt(2.0 * delta / c.chi2_q);
      const double b = 2.0 * kl_cubic_constant(c, d) * std::pow(2.0 * delta / c.chi2_q, 1.5) /
                       delta;
      c_disp = b * g;
      break;
    }
    case CovertMetric::TV: {
      if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
      const double gamma_const = q_inverse(0.5 * (1.0 - delta));
      g = 2.0 * gamma_const / std::sqrt(c.chi2_q);
      c_disp = 2.0 / std::sqrt(c.chi2_q) * cc * kSqrt2Pi *
               std::exp(0.5 * gamma_const * gamma_const);
      break;
    }
    case CovertMetric::BETA: {
      if (!(alpha > 0.0 && alpha < 1.0 && delta > 0.0 && delta < 1.0 - alpha)) {
        throw DomainError("need alpha in (0,1) and delta in (0, 1-alpha)");
      }
      const double lam = q_inverse(1.0 - alpha - delta);
      const double ups = q_inverse(alpha);
      if (!(lam + ups > 0.0)) throw DomainError("Lambda + Upsilon must be positive");
      g = (lam + ups) / std::sqrt(c.chi2_q);
      c_disp = cc * kSqrt2Pi * std::exp(0.5 * lam * lam) / std::sqrt(c.chi2_q);
      break;
    }
  }
  ConverseValue out;
  out.band_scale = 1.0;
  out.be_corrected = false;
  out.point = g * c.d_p * std::sqrt(n) -
              std::sqrt(g * c.v_p) * q_inverse(eps) * std::pow(n, 0.25) +
              std::log(std::sqrt(n) * g + c_disp);
  return out;
}

}  // namespace covert
