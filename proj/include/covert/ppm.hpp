#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "covert/channel.hpp"
#include "covert/sum_distribution.hpp"

namespace covert {

// (n, ell) pulse-position parameters: ell contiguous windows of size
// m = floor(n/ell); the remaining r = n - m*ell positions are always zero.
struct PpmParams {
  std::int64_t n = 0;
  std::int64_t ell = 0;
  std::int64_t m = 0;
  std::int64_t r = 0;
};

PpmParams make_ppm(std::int64_t n, std::int64_t ell);

// One codeword as sorted 1-based pulse positions, one uniform draw per window.
std::vector<std::int64_t> sample_ppm_codeword(const PpmParams& params, std::mt19937_64& rng);

struct RatioExpectation {
  double exact;  // (1 + chi2(P1||P0)/m)^ell
  double bound;  // exp(ell(ell+1) chi2 / n)
};

// E over the PPM output law of P_Y(Y)/P0^n(Y).
RatioExpectation ppm_ratio_expectation(const BinaryInputDmc& bob, const PpmParams& params);

// Laws of the per-block log ratio C = log(1 + mean_j A(Z_j)) under Q0^m and
// under the PPM block output law (built independently via the tilted-symbol
// reduction: one symbol from Q1, the rest from Q0).
struct BlockLlrLaw {
  SumDistribution under_null;
  SumDistribution under_ppm;
};

BlockLlrLaw ppm_block_llr_law(const BinaryInputDmc& willie, std::int64_t m,
                              std::size_t cap = kDefaultAtomCap);

// Exact covertness statistics of the PPM output law against Q0^n, computed
// from the per-block product structure.
double ppm_divergence_exact(const BinaryInputDmc& willie, const PpmParams& params,
                            std::size_t cap = kDefaultAtomCap);
double ppm_tv_exact(const BinaryInputDmc& willie, const PpmParams& params,
                    std::size_t cap = kDefaultAtomCap);
BetaResult ppm_beta_exact(const BinaryInputDmc& willie, const PpmParams& params, double alpha,
                          std::size_t cap = kDefaultAtomCap);

// The ell-fold law of the full-word log ratio log(P_Z^{n,ell}/Q0^n) under Q0^n.
SumDistribution ppm_word_llr_law(const BinaryInputDmc& willie, const PpmParams& params,
                                 std::size_t cap = kDefaultAtomCap);

// Closed-form covertness bounds: the explicit leading terms only. The
// O(1/sqrt(n)) residual carries an unknown constant and is surfaced through
// residual_scale (= 1/sqrt(n)), never added to value.
struct PpmBound {
  double value;
  double residual_scale;
  bool in_regime;  // false when ell is far from Theta(m) or m is small
};

PpmBound ppm_divergence_bound(const BinaryInputDmc& willie, const PpmParams& params);
PpmBound ppm_tv_bound(const BinaryInputDmc& willie, const PpmParams& params);
PpmBound ppm_beta_bound(const BinaryInputDmc& willie, const PpmParams& params, double alpha);

struct MomentSet {
  double e_b = 0, e_b2 = 0, e_b3 = 0, e_b4 = 0;
  double e_c = 0, var_c = 0, third_abs_c = 0;
};

// Exact moments of B = mean_j A(Z_j) and C = log(1+B) under Q0^m and under
// the PPM block law, together with the closed forms and their gaps. The
// closed-form third_abs_c is an upper bound, not an estimate.
struct PpmMoments {
  MomentSet exact_null, closed_null, gap_null;
  MomentSet exact_ppm, closed_ppm, gap_ppm;
};

PpmMoments ppm_moments(const BinaryInputDmc& willie, std::int64_t m,
                       std::size_t cap = kDefaultAtomCap);

struct TailWithBound {
  double bound;
  std::optional<double> exact;
};

// F_{XY|P0^n}(gamma) = P{sum of ell pulse LLRs <= gamma}: Gaussian bound
// Q((ell D_P - gamma)/sqrt(ell V_P)) + 6 T_P / (sqrt(ell) V_P^{3/2}) plus the
// exact tail from the ell-fold LLR law when it fits the cap.
TailWithBound f_xy_bound(const BinaryInputDmc& bob, std::int64_t ell, double gamma,
                         std::size_t cap = kDefaultAtomCap);

// Fbar_{XZ}(gamma) = P{sum of per-block information densities >= gamma}:
// Hoeffding form exp(-(gamma - ell D_Q)^2 / (2 ell log^2 mu_Z)) for
// gamma >= ell D_Q, plus the exact tail when enumerable.
TailWithBound f_xz_bound(const BinaryInputDmc& willie, const PpmParams& params, double gamma,
                         std::size_t cap = kDefaultAtomCap);

// As above but never throws on gamma < ell D_Q: the bound degrades to the
// trivial 1 there. Used where any valid upper bound on Fbar is acceptable.
TailWithBound f_xz_exact_or_bound(const BinaryInputDmc& willie, const PpmParams& params,
                                  double gamma, std::size_t cap = kDefaultAtomCap);

// Exact law of sum_i log(W^m(Z_i|X_i) / P_block(Z_i)) over the ell blocks.
SumDistribution ppm_information_density_law(const BinaryInputDmc& willie, const PpmParams& params,
                                            std::size_t cap = kDefaultAtomCap);

// log of min_z P_Z^{n,ell}(z) over the product space.
double ppm_min_log_prob(const BinaryInputDmc& willie, const PpmParams& params,
                        std::size_t cap = kDefaultAtomCap);

}  // namespace covert
