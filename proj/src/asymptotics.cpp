#include "covert/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "covert/gaussian.hpp"

namespace covert {

namespace {
constexpr double kPi = 3.141592653589793;
}

ChannelConstants channel_constants(const CovertChannelPair& pair) {
  if (pair.degenerate()) throw AssumptionViolation("constants need the standing assumptions");
  ChannelConstants c;
  c.d_p = pair.d_p();
  c.v_p = pair.v_p();
  c.t_p = pair.t_p();
  c.d_q = pair.d_q();
  c.chi2_q = pair.chi2_q();
  c.chi2_p = pair.chi2_p();
  c.mu_z = pair.mu_z();
  return c;
}

SecondOrderEstimate second_order_D(double n, double eps, double delta,
                                   const ChannelConstants& c) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("epsilon must lie in (0,1)");
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  const double omega = std::sqrt(2.0 * delta / c.chi2_q);
  SecondOrderEstimate out;
  out.point = omega * c.d_p * std::sqrt(n) -
              std::sqrt(omega * c.v_p) * q_inverse(eps) * std::pow(n, 0.25);
  out.log_band_scale = std::log(n);
  return out;
}

double cubic_root_trig(double p, double q) {
  if (!(p > 0.0)) throw ComplexRootRegime("need p > 0 for the trigonometric form");
  const double arg = -(3.0 * q / (2.0 * p)) * std::sqrt(3.0 / p);
  if (arg < -1.0 || arg > 1.0) {
    throw ComplexRootRegime("arccos argument outside [-1,1]: single real root");
  }
  return 2.0 * std::sqrt(p / 3.0) * std::cos(std::acos(arg) / 3.0);
}

namespace {

struct LogMResult {
  double log_m;
  bool be_corrected;
};

// log M = ell D_P - sqrt(ell V_P) Q^{-1}(eps_eff) - 2 log n, with the
// Berry-Esseen shift inside Q^{-1} when it is feasible.
LogMResult planner_log_m(double ell, double n, double eps, const ChannelConstants& c,
                         bool strict) {
  const double shift = (1.0 + 6.0 * c.t_p / std::pow(c.v_p, 1.5)) / std::sqrt(ell);
  const double eps_eff = eps - shift;
  if (eps_eff <= 0.0) {
    if (strict) {
      throw InfeasibleBlocklength("Q^{-1} argument eps - (1 + 6T_P/V_P^{3/2})/sqrt(ell) <= 0");
    }
    return {ell * c.d_p - std::sqrt(ell * c.v_p) * q_inverse(eps) - 2.0 * std::log(n), false};
  }
  return {ell * c.d_p - std::sqrt(ell * c.v_p) * q_inverse(eps_eff) - 2.0 * std::log(n), true};
}

double key_length(double log_m, double ell, double rho, const ChannelConstants& c) {
  return std::max(0.0, (1.0 + rho) * ell * c.d_q - log_m);
}

void finish_plan(CodePlan& plan, double n, double eps, double rho, const ChannelConstants& c,
                 bool strict) {
  const LogMResult lm = planner_log_m(plan.ell, n, eps, c, strict);
  plan.log_m = lm.log_m;
  if (!lm.be_corrected) {
    plan.dropped_terms.push_back("berry-esseen shift inside Q^{-1} (infeasible at this n)");
  }
  plan.log_k = key_length(plan.log_m, plan.ell, rho, c);
  plan.first_order_slope = plan.ell * c.d_p / std::sqrt(n);
  plan.dropped_terms.push_back("O(1) one-shot slack");
}

}  // namespace

double first_order_slope_D(double delta, const ChannelConstants& c) {
  return std::sqrt(2.0 * delta / c.chi2_q) * c.d_p;
}

double first_order_slope_V(double delta, const ChannelConstants& c) {
  return 2.0 * q_inverse(0.5 * (1.0 - delta)) * c.d_p / std::sqrt(c.chi2_q);
}

double first_order_slope_beta(double delta, double alpha, const ChannelConstants& c) {
  return (q_inverse(1.0 - alpha - delta) + q_inverse(alpha)) * c.d_p / std::sqrt(c.chi2_q);
}

CodePlan plan_D(double n, double eps, double delta, double rho, const ChannelConstants& c,
                bool strict) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("epsilon must lie in (0,1)");
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  CodePlan plan;
  plan.n = n;
  plan.metric = CovertMetric::KL;
  const double omega = std::sqrt(2.0 * delta / c.chi2_q);

  // Covertness target for the leading divergence term ell^2 chi2 / (2n).
  double delta_eff = delta - 1.0 / std::sqrt(n);
  if (delta_eff <= 0.0) {
    if (strict) throw InfeasibleBlocklength("delta - 1/sqrt(n) <= 0");
    delta_eff = delta;
    plan.dropped_terms.push_back("1/sqrt(n) covertness margin (n too small)");
  }
  // Smallest t >= 0 with floor(omega sqrt(n) - t)^2 chi2/(2n) <= delta_eff;
  // equivalently ell = min(floor(omega sqrt(n)), floor(sqrt(2 n delta_eff/chi2))).
  const double ell_cap = std::floor(std::sqrt(2.0 * n * delta_eff / c.chi2_q));
  plan.ell = std::min(std::floor(omega * std::sqrt(n)), ell_cap);
  if (plan.ell < 1.0) throw InfeasibleBlocklength("no feasible pulse count at this n");
  finish_plan(plan, n, eps, rho, c, strict);
  plan.dropped_terms.push_back("O(ell^3/n^2) divergence residual");

  const SecondOrderEstimate disp = second_order_D(n, eps, delta, c);
  plan.envelope_upper = disp.point;
  plan.envelope_lower = disp.point;
  return plan;
}

namespace {

// Shared core of the V and beta planners: choose sqrt(ell) as the largest
// root of x^3 - p x + q = 0 with p = s * sqrt(n / chi2) and
// q = penalty * sqrt(n / chi2); fall back to the first-order ell when the
// cubic has no real triple at this n.
double cubic_ell(double n, double s, double penalty, double chi2,
                 std::vector<std::string>& dropped, bool strict, bool& in_regime) {
  const double scale = std::sqrt(n / chi2);
  const double p = s * scale;
  const double q = penalty * scale;
  try {
    const double root = cubic_root_trig(p, q);
    in_regime = true;
    return std::floor(root * root);
  } catch (const ComplexRootRegime&) {
    if (strict) throw;
    in_regime = false;
    dropped.push_back("n^{1/4} pulse-count correction (cubic in complex regime)");
    return std::floor(s * scale);
  }
}

}  // namespace

CodePlan plan_V(double n, double eps, double delta, double rho, const ChannelConstants& c,
                bool strict) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("epsilon must lie in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  CodePlan plan;
  plan.n = n;
  plan.metric = CovertMetric::TV;
  const double gamma_const = q_inverse(0.5 * (1.0 - delta));
  const double penalty = 2.0 * std::sqrt(2.0 * kPi) * std::exp(0.5 * gamma_const * gamma_const);
  plan.ell = cubic_ell(n, 2.0 * gamma_const, penalty, c.chi2_q, plan.dropped_terms, strict,
                       plan.second_order_regime);
  if (plan.ell < 1.0) {
    if (strict) throw InfeasibleBlocklength("no feasible pulse count at this n");
    plan.ell = 1.0;
    plan.dropped_terms.push_back("pulse count clamped to 1");
  }
  finish_plan(plan, n, eps, rho, c, strict);

  const double slope = first_order_slope_V(delta, c);
  const double second = std::sqrt(2.0 * gamma_const * c.v_p / std::sqrt(c.chi2_q)) *
                        q_inverse(eps);
  const double extra = 2.0 * std::sqrt(kPi) * std::exp(0.5 * gamma_const * gamma_const) * c.d_p /
                       (std::sqrt(gamma_const) * std::pow(c.chi2_q, 0.25));
  plan.envelope_upper = slope * std::sqrt(n) - second * std::pow(n, 0.25);
  plan.envelope_lower = slope * std::sqrt(n) - (second + extra) * std::pow(n, 0.25);
  return plan;
}

CodePlan plan_beta(double n, double eps, double delta, double alpha, double rho,
                   const ChannelConstants& c, bool strict) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("epsilon must lie in (0,1)");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
  if (!(delta > 0.0 && delta < 1.0 - alpha)) throw DomainError("delta must lie in (0, 1-alpha)");
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  CodePlan plan;
  plan.n = n;
  plan.metric = CovertMetric::BETA;
  const double lam = q_inverse(1.0 - alpha - delta);
  const double ups = q_inverse(alpha);
  const double s = lam + ups;
  const double penalty = std::sqrt(2.0 * kPi) *
                         (std::exp(0.5 * lam * lam) + std::exp(0.5 * ups * ups));
  if (s <= 0.0) {
    // Zero (or negative) first-order slope: degenerate plan with one pulse.
    plan.ell = 1.0;
    plan.second_order_regime = false;
    plan.dropped_terms.push_back("pulse count clamped to 1 (Lambda + Upsilon <= 0)");
  } else {
    plan.ell = cubic_ell(n, s, penalty, c.chi2_q, plan.dropped_terms, strict,
                         plan.second_order_regime);
    if (plan.ell < 1.0) {
      if (strict) throw InfeasibleBlocklength("no feasible pulse count at this n");
      plan.ell = 1.0;
      plan.dropped_terms.push_back("pulse count clamped to 1");
    }
  }
  finish_plan(plan, n, eps, rho, c, strict);

  const double slope = first_order_slope_beta(delta, alpha, c);
  const double second =
      s > 0.0 ? std::sqrt(s * c.v_p / std::sqrt(c.chi2_q)) * q_inverse(eps) : 0.0;
  const double extra = s > 0.0 ? penalty * c.d_p / (std::sqrt(s) * std::pow(c.chi2_q, 0.25)) : 0.0;
  plan.envelope_upper = slope * std::sqrt(n) - second * std::pow(n, 0.25);
  plan.envelope_lower = slope * std::sqrt(n) - (second + extra) * std::pow(n, 0.25);
  return plan;
}

OrderingReport metric_ordering_check(double delta, const ChannelConstants& c,
                                     std::size_t alpha_grid) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
  OrderingReport r{};
  const double dv = std::sqrt(delta / 2.0);
  r.slope_d = first_order_slope_D(delta, c);
  r.slope_v = first_order_slope_V(dv, c);
  r.slope_beta_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i <= alpha_grid; ++i) {
    const double alpha = static_cast<double>(i) / static_cast<double>(alpha_grid + 1);
    if (dv >= 1.0 - alpha) continue;
    r.slope_beta_min = std::min(r.slope_beta_min, first_order_slope_beta(dv, alpha, c));
  }
  r.ordered = r.slope_d <= r.slope_v + 1e-12 && r.slope_v <= r.slope_beta_min + 1e-12;
  return r;
}

}  // namespace covert
