#include "covert/distribution.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

namespace covert {

namespace {

constexpr double kProbSumTol = 1e-12;

}  // namespace

FiniteDistribution::FiniteDistribution(std::vector<int> alphabet, std::vector<double> probs)
    : alphabet_(std::move(alphabet)), probs_(std::move(probs)) {
  if (alphabet_.size() != probs_.size() || probs_.empty()) {
    throw InvalidParams("distribution needs matching, nonempty alphabet and probs");
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw InvalidParams("negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbSumTol * static_cast<double>(probs_.size())) {
    throw InvalidParams("probabilities do not sum to one");
  }
  std::vector<int> sorted = alphabet_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidParams("alphabet labels must be unique");
  }
}

FiniteDistribution FiniteDistribution::from_probs(std::vector<double> probs) {
  std::vector<int> labels(probs.size());
  std::iota(labels.begin(), labels.end(), 0);
  return FiniteDistribution(std::move(labels), std::move(probs));
}

FiniteDistribution FiniteDistribution::uniform(std::size_t size) {
  return from_probs(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

double FiniteDistribution::min_positive_prob() const {
  double best = std::numeric_limits<double>::infinity();
  for (double p : probs_) {
    if (p > 0.0 && p < best) best = p;
  }
  return best;
}

bool FiniteDistribution::same_alphabet(const FiniteDistribution& other) const {
  return alphabet_ == other.alphabet_;
}

namespace {

void require_same_alphabet(const FiniteDistribution& p, const FiniteDistribution& q) {
  if (!p.same_alphabet(q)) throw AlphabetMismatch("distributions on different alphabets");
}

}  // namespace

double kl_divergence(const FiniteDistribution& p, const FiniteDistribution& q) {
  require_same_alphabet(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p.prob(i);
    if (pi == 0.0) continue;
    const double qi = q.prob(i);
    if (qi == 0.0) {
      throw AbsoluteContinuityViolation("P(x) > 0 where Q(x) = 0");
    }
    sum += pi * std::log(pi / qi);
  }
  return sum;
}

double total_variation(const FiniteDistribution& p, const FiniteDistribution& q) {
  require_same_alphabet(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sum += std::abs(p.prob(i) - q.prob(i));
  }
  return 0.5 * sum;
}

double chi_squared(const FiniteDistribution& p, const FiniteDistribution& q) {
  require_same_alphabet(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p.prob(i) - q.prob(i);
    const double qi = q.prob(i);
    if (qi == 0.0) {
      if (p.prob(i) == 0.0) continue;
      throw AbsoluteContinuityViolation("P(x) > 0 where Q(x) = 0");
    }
    sum += d * d / qi;
  }
  return sum;
}

namespace {

// Exhaustive minimum of Q(T) over deterministic sets with P(not T) <= alpha.
BetaResult beta_exhaustive(std::span<const double> p, std::span<const double> q, double alpha) {
  const std::size_t k = p.size();
  const std::uint32_t masks = 1u << k;
  double best_beta = std::numeric_limits<double>::infinity();
  double best_alpha = 0.0;
  // Bit set in the mask = atom excluded from T (rejected under the null).
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    double excl_p = 0.0;
    double excl_q = 0.0;
    for (std::uint32_t b = mask; b != 0; b &= b - 1) {
      const unsigned i = static_cast<unsigned>(std::countr_zero(b));
      excl_p += p[i];
      excl_q += q[i];
    }
    if (excl_p > alpha + 1e-15) continue;
    const double beta = 1.0 - excl_q;
    if (beta < best_beta - 1e-18) {
      best_beta = beta;
      best_alpha = excl_p;
    }
  }
  return BetaResult{std::max(best_beta, 0.0), best_alpha, true};
}

}  // namespace

BetaResult beta_alpha_classes(std::vector<RatioClass> classes, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0,1]");
  // Exclude classes with the largest alt/null ratio first; a class whose null
  // mass does not fit the remaining budget is skipped, not a stopping point.
  std::stable_sort(classes.begin(), classes.end(), [](const RatioClass& a, const RatioClass& b) {
    const bool a_inf = a.null_mass == 0.0;
    const bool b_inf = b.null_mass == 0.0;
    if (a_inf != b_inf) return a_inf;
    if (a_inf && b_inf) return false;
    return a.alt_mass * b.null_mass > b.alt_mass * a.null_mass;
  });
  double excl_p = 0.0;
  double excl_q = 0.0;
  double budget = alpha;
  for (const RatioClass& c : classes) {
    if (c.alt_mass <= 0.0 && c.null_mass > 0.0) continue;  // excluding gains nothing
    if (c.null_mass <= budget + 1e-15) {
      budget -= c.null_mass;
      excl_p += c.null_mass;
      excl_q += c.alt_mass;
    }
  }
  return BetaResult{std::max(1.0 - excl_q, 0.0), excl_p, false};
}

BetaResult beta_alpha_report(const FiniteDistribution& p, const FiniteDistribution& q,
                             double alpha) {
  require_same_alphabet(p, q);
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0,1]");
  if (p.size() <= kExhaustiveBetaLimit) {
    return beta_exhaustive(p.probs(), q.probs(), alpha);
  }
  // Group atoms sharing a likelihood ratio into classes, then run the greedy
  // likelihood-ratio exclusion on the classes.
  std::vector<std::pair<double, std::size_t>> order(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double ratio = p.prob(i) == 0.0 ? std::numeric_limits<double>::infinity()
                                          : q.prob(i) / p.prob(i);
    order[i] = {ratio, i};
  }
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<RatioClass> classes;
  for (std::size_t i = 0; i < order.size();) {
    RatioClass c{0.0, 0.0};
    const double r = order[i].first;
    std::size_t j = i;
    for (; j < order.size(); ++j) {
      const double rj = order[j].first;
      const bool same = (std::isinf(r) && std::isinf(rj)) ||
                        std::abs(rj - r) <= 1e-12 * std::max(1.0, std::abs(r));
      if (!same) break;
      c.null_mass += p.prob(order[j].second);
      c.alt_mass += q.prob(order[j].second);
    }
    classes.push_back(c);
    i = j;
  }
  return beta_alpha_classes(std::move(classes), alpha);
}

double beta_alpha(const FiniteDistribution& p, const FiniteDistribution& q, double alpha) {
  return beta_alpha_report(p, q, alpha).beta;
}

}  // namespace covert
