#pragma once

#include <string>
#include <vector>

#include "covert/channel.hpp"
#include "covert/coding.hpp"

namespace covert {

// Scalar channel constants entering the second-order formulas. All in nats.
struct ChannelConstants {
  double d_p = 0;     // D(P1||P0)
  double v_p = 0;     // Var of log(P1/P0) under P1
  double t_p = 0;     // E_P1 |log(P1/P0) - D_P|^3
  double d_q = 0;     // D(Q1||Q0)
  double chi2_q = 0;  // chi2(Q1||Q0)
  double chi2_p = 0;  // chi2(P1||P0)
  double mu_z = 0;    // smallest positive output probability at the adversary
};

ChannelConstants channel_constants(const CovertChannelPair& pair);

// Point value with an O(log n) band of unknown constant: value +- K log n.
struct SecondOrderEstimate {
  double point;
  double log_band_scale;  // log n
};

// Closed-form second-order message length for the KL metric.
SecondOrderEstimate second_order_D(double n, double eps, double delta,
                                   const ChannelConstants& c);

// Largest real root of x^3 - p x + q = 0 in the three-real-roots regime, via
// 2 sqrt(p/3) cos((1/3) arccos(-(3q/2p) sqrt(3/p))).
double cubic_root_trig(double p, double q);

// Blocklength plan for one covertness metric. Point values keep the explicit
// display terms; every excluded O-term or out-of-regime fallback is listed in
// dropped_terms. first_order_slope = ell * D_P / sqrt(n) is the planner's
// reconstruction of the first-order asymptote.
struct CodePlan {
  double n = 0;
  CovertMetric metric = CovertMetric::KL;
  double ell = 0;
  double log_m = 0;  // nats
  double log_k = 0;  // nats
  double first_order_slope = 0;
  double envelope_upper = 0;  // closed-form envelope, nats
  double envelope_lower = 0;
  bool second_order_regime = true;  // false when a fallback ell was used
  std::vector<std::string> dropped_terms;
};

// strict mode requires the Berry-Esseen-corrected Q^{-1} argument
// and the delta - 1/sqrt(n) covertness margin to be feasible, else throws
// InfeasibleBlocklength. The default keeps the explicit display terms and
// records what was dropped.
CodePlan plan_D(double n, double eps, double delta, double rho, const ChannelConstants& c,
                bool strict = false);
CodePlan plan_V(double n, double eps, double delta, double rho, const ChannelConstants& c,
                bool strict = false);
CodePlan plan_beta(double n, double eps, double delta, double alpha, double rho,
                   const ChannelConstants& c, bool strict = false);

// First-order slopes of logM/sqrt(n) per metric.
double first_order_slope_D(double delta, const ChannelConstants& c);
double first_order_slope_V(double delta, const ChannelConstants& c);
double first_order_slope_beta(double delta, double alpha, const ChannelConstants& c);

struct OrderingReport {
  double slope_d;
  double slope_v;        // at sqrt(delta/2)
  double slope_beta_min; // over the alpha grid, at sqrt(delta/2)
  bool ordered;
};

// slope_D(delta) <= slope_V(sqrt(delta/2)) <= min_alpha slope_beta(sqrt(delta/2), alpha).
OrderingReport metric_ordering_check(double delta, const ChannelConstants& c,
                                     std::size_t alpha_grid = 199);

}  // namespace covert
