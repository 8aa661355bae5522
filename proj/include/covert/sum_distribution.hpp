#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "covert/distribution.hpp"

namespace covert {

// Cap on type classes / atoms of exact enumerations.
inline constexpr std::size_t kDefaultAtomCap = 10'000'000;
// Relative tolerance for merging atoms whose values coincide.
inline constexpr double kValueMergeTol = 1e-12;

// Exact distribution of a sum of independent finite-valued scores, stored as
// value -> probability atoms with strictly increasing values. -inf values are
// allowed (log-ratio laws without two-sided absolute continuity).
class SumDistribution {
 public:
  struct Atom {
    double value;
    double prob;
  };

  SumDistribution();  // point mass at 0 with count 0
  static SumDistribution point_mass(double value);
  static SumDistribution from_atoms(std::vector<Atom> atoms, std::uint64_t count);

  std::span<const Atom> atoms() const { return atoms_; }
  std::uint64_t count() const { return count_; }
  double total_prob() const;

  double mean() const;
  double variance() const;
  double central_moment(int k) const;
  double third_abs_central() const;

  double cdf(double x) const;       // P{S <= x}
  double tail_geq(double x) const;  // P{S >= x}
  double tail_gt(double x) const;   // P{S > x}

  SumDistribution convolve(const SumDistribution& other, std::size_t cap = kDefaultAtomCap) const;
  // k-fold self-convolution.
  SumDistribution power(std::uint64_t k, std::size_t cap = kDefaultAtomCap) const;
  // Applies f to atom values, re-sorts and merges; count is preserved.
  SumDistribution mapped(const std::function<double(double)>& f) const;
  // Reweights atom probabilities by exp(value). For the law of a log-ratio
  // statistic under the null this yields its law under the alternative.
  SumDistribution tilted_by_exp() const;

 private:
  std::vector<Atom> atoms_;
  std::uint64_t count_ = 0;
};

// Exact law of sum_{i<count} score(X_i) with X_i i.i.d. ~ base, by multinomial
// type-class enumeration. score is indexed like the alphabet of base.
SumDistribution iid_sum_distribution(std::span<const double> score, const FiniteDistribution& base,
                                     std::uint64_t count, std::size_t cap = kDefaultAtomCap);

}  // namespace covert
