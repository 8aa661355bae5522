#pragma once

#include <span>
#include <vector>

#include "covert/errors.hpp"

namespace covert {

// Probability mass function over a small labeled alphabet: the atom of all
// statistics in this library. Probabilities are nonnegative and sum to one
// within 1e-12; labels are unique.
class FiniteDistribution {
 public:
  FiniteDistribution(std::vector<int> alphabet, std::vector<double> probs);

  // Labels 0..k-1.
  static FiniteDistribution from_probs(std::vector<double> probs);
  static FiniteDistribution uniform(std::size_t size);

  std::size_t size() const { return probs_.size(); }
  int label(std::size_t i) const { return alphabet_[i]; }
  double prob(std::size_t i) const { return probs_[i]; }
  std::span<const int> alphabet() const { return alphabet_; }
  std::span<const double> probs() const { return probs_; }

  // mu_A: smallest probability among atoms that can occur at all.
  double min_positive_prob() const;

  bool same_alphabet(const FiniteDistribution& other) const;

 private:
  std::vector<int> alphabet_;
  std::vector<double> probs_;
};

// All divergences use natural logarithms.
double kl_divergence(const FiniteDistribution& p, const FiniteDistribution& q);
double total_variation(const FiniteDistribution& p, const FiniteDistribution& q);
double chi_squared(const FiniteDistribution& p, const FiniteDistribution& q);

struct BetaResult {
  double beta;            // inf over deterministic T with P(X \ T) <= alpha of Q(T)
  double achieved_alpha;  // false alarm P(X \ T) of the minimizing set
  bool exhaustive;        // true: subset enumeration; false: likelihood-ratio classes
};

// Optimal missed detection over deterministic acceptance sets. Alphabets of
// at most kExhaustiveBetaLimit atoms are solved by exhaustive subset
// enumeration; larger ones by likelihood-ratio ordering over ratio classes
// (exclude classes of largest Q/P first while the alpha budget allows).
inline constexpr std::size_t kExhaustiveBetaLimit = 20;

BetaResult beta_alpha_report(const FiniteDistribution& p, const FiniteDistribution& q,
                             double alpha);
double beta_alpha(const FiniteDistribution& p, const FiniteDistribution& q, double alpha);

// One likelihood-ratio class of a binary test: total mass under the null and
// the alternative of all atoms sharing the ratio alt/null.
struct RatioClass {
  double null_mass;
  double alt_mass;
};

// Same optimization on pre-aggregated ratio classes (used for product-space
// tests where atoms are grouped by their log-likelihood ratio).
BetaResult beta_alpha_classes(std::vector<RatioClass> classes, double alpha);

}  // namespace covert
