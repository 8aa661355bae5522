#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "covert/asymptotics.hpp"
#include "covert/channel.hpp"
#include "covert/sum_distribution.hpp"

namespace covert {

// The adversary's weight-sensing test: reject the innocent hypothesis when
// sum_i A(z_i) > tau with A(z) = (Q1(z)-Q0(z))/Q0(z).
struct DetectorSpec {
  ScoreA score;
  double tau = 0.0;
};

// T(z) = 1{sum_i A(z_i) > tau} on a full output word of alphabet indices.
bool detector_decide(const DetectorSpec& spec, std::span<const int> z);

// Per-symbol moments of A under Q0 and Q1, and the assembled bound constants.
// Each constant carries the formula it was assembled from.
struct DetectorConstants {
  double mu0 = 0, sigma0 = 0, t0 = 0;
  double mu1 = 0, sigma1 = 0, t1 = 0;
  double b0 = 0;  // 6 t0 / sigma0^3
  double b1 = 0;  // 6 max(t0,t1) / min(sigma0^2, sigma1^2)^{3/2}
  double b2 = 0;  // sigma1 (sigma1^2 - sigma0^2) / (2 sigma0^3), 0 when sigma1 <= sigma0
  double b3 = 0;  // (mu1 - mu0) b2 / (2 sqrt(2 pi) sigma0)
  std::vector<std::pair<std::string, double>> formulas;
};

DetectorConstants detector_constants(const BinaryInputDmc& willie);

// Exact law of sum_i A(Z_i) when the transmitted word has weight w: the
// w-fold law of A under Q1 convolved with the (n-w)-fold law under Q0.
SumDistribution detector_statistic_law(std::int64_t n, std::int64_t w,
                                       const BinaryInputDmc& willie,
                                       std::size_t cap = kDefaultAtomCap);

struct RocPoint {
  double false_alarm = 0;
  double missed_detection = 0;
};

struct RocPair {
  RocPoint exact;   // from the statistic laws at tau
  RocPoint bound;   // Gaussian + Berry-Esseen chain (alpha and beta bounds)
};

// ROC at threshold tau for a weight-w_min single-weight codebook.
RocPair detector_roc(std::int64_t n, std::int64_t w_min, const BinaryInputDmc& willie, double tau,
                     std::size_t cap = kDefaultAtomCap);

// 1 - 2Q(w sqrt(chi2)/(2 sqrt(n))) - (B0+B1)/sqrt(n) - w^2 B3 / n^{3/2}.
double tv_lower_bound_from_wmin(std::int64_t n, std::int64_t w_min, const BinaryInputDmc& willie);

// Q(w sqrt(chi2/n) - Q^{-1}(alpha)) + B/sqrt(n) + w^2 B3/n^{3/2}; requires
// w_min > sqrt(n) Q^{-1}(alpha)/sqrt(chi2).
double beta_upper_bound_from_wmin(std::int64_t n, std::int64_t w_min, double alpha,
                                  const BinaryInputDmc& willie);

struct ConverseValue {
  double point;       // nats
  double band_scale;  // the O(1) band enters as K * this (typically 1)
  bool be_corrected;  // Q^{-1}(1 - eps - 2B/sqrt(w)) was feasible
};

// Single-codeword-weight converse: w D_P + sqrt(w V_P) Q^{-1}(1-eps') - log(B/sqrt(w)).
ConverseValue converse_logM_from_weight(double w, double eps, const ChannelConstants& c, double n);

// Weight caps per sqrt(n) implied by each covertness level; gamma is the
// sub-codebook fraction of the all-codes branch (0 for constant composition).
double weight_bound_D(double delta, double n, const ChannelConstants& c,
                      const DetectorConstants& d);
double weight_bound_V(double delta, double n, double gamma, const ChannelConstants& c,
                      const DetectorConstants& d);
double weight_bound_beta(double delta, double alpha, double n, double gamma,
                         const ChannelConstants& c, const DetectorConstants& d);

// g(delta) D_P sqrt(n) - sqrt(g(delta) V_P) Q^{-1}(eps) n^{1/4} + log(sqrt(n) g + C),
// with g the n-free part of the metric's weight cap.
ConverseValue converse_secondorder(CovertMetric metric, double n, double eps, double delta,
                                   double alpha, const ChannelConstants& c,
                                   const DetectorConstants& d);

}  // namespace covert
