#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "covert/channel.hpp"
#include "covert/ppm.hpp"

namespace covert {

// Keyed codebook of pulse-position codewords: K subcodes of M messages each.
// Codewords are sorted 1-based pulse index lists.
struct Codebook {
  std::int64_t n = 0;
  std::int64_t m_messages = 0;  // M
  std::int64_t k_keys = 0;      // K
  std::int64_t ell = 0;
  std::vector<std::vector<std::int64_t>> codewords;  // index s*M + w

  const std::vector<std::int64_t>& word(std::int64_t s, std::int64_t w) const {
    return codewords[static_cast<std::size_t>(s * m_messages + w)];
  }
  // Common weight when the code has constant composition, else nullopt.
  std::optional<std::int64_t> common_weight() const;
  void validate() const;
};

Codebook generate_codebook(const PpmParams& params, std::int64_t m_messages, std::int64_t k_keys,
                           std::uint64_t seed);

// Plain-text format: literal header "n,M,K,ell", the four values, then one
// codeword per line as comma-separated pulse indices (empty line = all-zero).
std::string serialize_codebook(const Codebook& code);
Codebook parse_codebook(std::string_view text);

// Threshold decoder against the reference output law Q_Y = P0^n: returns w
// iff it is the unique index with sum_i log(W(y_i|x_i)/P0(y_i)) > gamma,
// otherwise nullopt (erasure). y holds output alphabet indices.
std::optional<std::int64_t> threshold_decode(const Codebook& code, std::int64_t key,
                                             std::span<const int> y, double gamma,
                                             const CovertChannelPair& channel);

struct ErrorBounds {
  double eps1_expectation;  // F_{XY|P0^n}(gamma), exact
  double eps2_bound;        // (M / e^gamma) E[P_Y/Q_Y]
};

ErrorBounds error_expectation_bounds(const CovertChannelPair& channel, const PpmParams& params,
                                     std::int64_t m_messages, double gamma,
                                     std::size_t cap = kDefaultAtomCap);

// Exact adversary output distribution of a codebook over Z^n; labels are the
// base-|Z| encodings of the output words.
FiniteDistribution induced_output_distribution(const Codebook& code, const BinaryInputDmc& willie,
                                               std::size_t cap = 1u << 20);

// Soft-covering bound on E[D(Phat_Z || P_Z)] for MK i.i.d. PPM codewords:
// log(1/mu + 1) * Fbar_XZ(gamma2) + exp(gamma2)/(MK).
double resolvability_expectation_bound(double gamma2, double mk, double mu_z_n,
                                       const BinaryInputDmc& willie, const PpmParams& params,
                                       std::size_t cap = kDefaultAtomCap);

struct BoundedDifferenceConstants {
  double c_tv;  // 1/M
  double c_kl;  // (1/M) log(M |Z^n| / mu^2)
};

BoundedDifferenceConstants bounded_difference_constants(double m_total, double alphabet_size,
                                                        double mu);
// Same with the alphabet size and mu given in logs (large product spaces).
BoundedDifferenceConstants bounded_difference_constants_log(double m_total, double log_alphabet,
                                                            double log_mu);

// McDiarmid tail exp(-2 lambda^2 / (M c^2)) for M independent coordinates of
// equal bounded difference c.
double mcdiarmid_tail(double lambda, double m_total, double c);

struct OneShotCertificate {
  double gamma1 = 0, gamma2 = 0;
  double lambda1 = 0, lambda2 = 0, lambda3 = 0;
  double reliability_bound = 0;    // event threshold on P*_err
  double resolvability_bound = 0;  // event threshold on D(Phat_Z || P_Z)
  double existence_margin = 0;     // > 0 certifies a code with both properties
  bool exists() const { return existence_margin > 0.0; }
};

struct OneShotLambdas {
  double lambda1, lambda2, lambda3;
};

// Existence certificate for MK i.i.d. PPM codewords; the margin
// (1 - e^{-2M lambda1^2} - 1/lambda2)^K - exp(-2MK lambda3^2 / L^2),
// L = log(MK |Z|^n / mu^2) on the product space, lower-bounds
// P(E1) + P(E2) - 1 for the reliability and resolvability events.
OneShotCertificate existence_certificate(double m_messages, double k_keys,
                                         const OneShotLambdas& lambdas, double gamma1,
                                         double gamma2, const CovertChannelPair& channel,
                                         const PpmParams& params,
                                         std::size_t cap = kDefaultAtomCap);

// Same certificate with M and K given as natural logarithms, for blocklengths
// where the counts overflow doubles.
OneShotCertificate existence_certificate_log(double log_m, double log_k,
                                             const OneShotLambdas& lambdas, double gamma1,
                                             double gamma2, const CovertChannelPair& channel,
                                             const PpmParams& params,
                                             std::size_t cap = kDefaultAtomCap);

enum class CovertMetric { KL, TV, BETA };

struct ConditionReport {
  struct Item {
    std::string name;
    bool pass = false;
    double slack = 0.0;  // positive = satisfied with room
    std::string mode;    // exact | bound
  };
  std::vector<Item> items;
  bool all_pass() const;
};

// Evaluates the four sufficient conditions for a covert code to exist at
// blocklength n for a candidate (log M, log K) at the given PPM parameters.
ConditionReport verify_achievability_conditions(double n, double log_m, double log_k,
                                                CovertMetric metric, const CovertChannelPair&,
                                                const PpmParams& params, double delta,
                                                double epsilon, double alpha = 0.0,
                                                std::size_t cap = kDefaultAtomCap);

struct DilutionResult {
  Codebook codebook;
  std::int64_t added_per_key = 0;
  double alpha_achieved = 0.0;  // added / M
};

// Appends ceil(alpha * M) all-zero codewords to every subcode.
DilutionResult dilute_codebook(const Codebook& code, double alpha_fraction);
// Predicted transformations of the original code's error and KL level.
double diluted_error_bound(double eps_prime, double alpha);
double diluted_kl_bound(double delta_prime, double alpha);

struct MonteCarloError {
  double p_err_max_keys = 0.0;
  double p_err_avg = 0.0;
  std::vector<double> per_key;
  double wilson_low = 0.0;   // 95% interval for the max-over-keys estimate
  double wilson_high = 0.0;
  std::uint64_t trials_per_key = 0;
};

MonteCarloError simulate_error(const Codebook& code, const CovertChannelPair& channel,
                               double gamma, std::uint64_t trials_per_key, std::uint64_t seed);

struct WilsonInterval {
  double low, high;
};
WilsonInterval wilson_interval(double successes, double trials, double z = 1.959963984540054);

}  // namespace covert
