#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "covert/adversary.hpp"
#include "covert/coding.hpp"

namespace covert::verification {

struct CheckResult {
  std::string name;
  bool pass = false;
  double slack = 0.0;  // positive = satisfied with room
  std::string mode;    // exact | bound | monte-carlo
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

std::vector<std::string> suite_names();

// Suites: exact-oracles, concentration, sandwich, moments.
SuiteReport run_suite(const std::string& name, std::uint64_t seed);

// Independent oracle: the PPM output distribution over Z^n built by summing
// the channel law over every pulse pattern (no block factorization).
FiniteDistribution ppm_output_distribution_enumerated(const BinaryInputDmc& willie,
                                                      const PpmParams& params,
                                                      std::size_t cap = 1u << 21);

// Q^{(n)} product distribution over the same Z^n labeling.
FiniteDistribution product_distribution(const FiniteDistribution& base, std::int64_t n,
                                        std::size_t cap = 1u << 21);

// beta_alpha(null, alt) on explicit product-space distributions, through the
// same likelihood-ratio class reduction the block route uses.
BetaResult beta_between_enumerated(const FiniteDistribution& null_dist,
                                   const FiniteDistribution& alt_dist, double alpha);

// Random full-support binary-input DMC to the adversary with |Z| in {2..max_z}
// and entries bounded away from zero.
BinaryInputDmc random_two_sided_dmc(std::mt19937_64& rng, std::size_t max_z);

}  // namespace covert::verification
