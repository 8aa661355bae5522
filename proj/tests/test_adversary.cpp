#include <cmath>
#include <random>
#include <vector>

#include "covert/adversary.hpp"
#include "covert/coding.hpp"
#include "covert/gaussian.hpp"
#include "covert/rng.hpp"
#include "covert/verification.hpp"
#include "doctest.h"

using namespace covert;

namespace {

const CovertChannelPair& fig2_channel() {
  static const CovertChannelPair pair = CovertChannelPair::from_bsc(0.11, 0.45);
  return pair;
}

// Oracle: law of sum A(Z_i) for a weight-w word by enumerating all |Z|^n outputs.
SumDistribution brute_force_detector_law(std::int64_t n, std::int64_t w,
                                         const BinaryInputDmc& willie) {
  const ScoreA score = ScoreA::from(willie);
  const std::size_t zs = willie.output_size();
  std::size_t total = 1;
  for (std::int64_t i = 0; i < n; ++i) total *= zs;
  std::vector<SumDistribution::Atom> atoms;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    double prob = 1.0;
    double value = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      const std::size_t z = c % zs;
      c /= zs;
      prob *= (i < w ? willie.on.prob(z) : willie.off.prob(z));
      value += score.values[z];
    }
    atoms.push_back({value, prob});
  }
  return SumDistribution::from_atoms(std::move(atoms), static_cast<std::uint64_t>(n));
}

}  // namespace

TEST_CASE("detector constants carry their formulas") {
  const DetectorConstants d = detector_constants(fig2_channel().willie());
  CHECK(d.mu0 == doctest::Approx(0.0));
  const double chi2 = chi_squared(fig2_channel().willie().on, fig2_channel().willie().off);
  CHECK(d.mu1 == doctest::Approx(chi2).epsilon(1e-12));
  CHECK(d.sigma0 * d.sigma0 == doctest::Approx(chi2).epsilon(1e-12));
  CHECK(d.formulas.size() == 4);
  CHECK(d.b0 > 0.0);
}

TEST_CASE("detector statistic law: endpoints and brute force") {
  const BinaryInputDmc willie = bsc(0.45);
  const double chi2 = chi_squared(willie.on, willie.off);

  const SumDistribution null_law = detector_statistic_law(8, 0, willie);
  CHECK(null_law.mean() == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  const SumDistribution full = detector_statistic_law(8, 8, willie);
  CHECK(full.mean() == doctest::Approx(8.0 * chi2).epsilon(1e-12));

  const SumDistribution law = detector_statistic_law(6, 2, willie);
  const SumDistribution brute = brute_force_detector_law(6, 2, willie);
  REQUIRE(law.atoms().size() == brute.atoms().size());
  for (std::size_t i = 0; i < law.atoms().size(); ++i) {
    CHECK(law.atoms()[i].value ==
          doctest::Approx(brute.atoms()[i].value).epsilon(1e-11).scale(1.0));
    CHECK(law.atoms()[i].prob ==
          doctest::Approx(brute.atoms()[i].prob).epsilon(1e-11).scale(1.0));
  }
}

TEST_CASE("detector decision matches the exact statistic law under simulation") {
  const BinaryInputDmc willie = bsc(0.45);
  DetectorSpec spec{ScoreA::from(willie), 0.08};
  const std::int64_t n = 12;
  const SumDistribution law = detector_statistic_law(n, 0, willie);
  const double exact_alarm = law.tail_gt(spec.tau);

  std::mt19937_64 rng(4242);
  const int trials = 200000;
  int alarms = 0;
  std::vector<int> z(static_cast<std::size_t>(n));
  for (int t = 0; t < trials; ++t) {
    for (auto& zi : z) zi = static_cast<int>(sample_index(rng, willie.off.probs()));
    alarms += detector_decide(spec, z) ? 1 : 0;
  }
  const double freq = static_cast<double>(alarms) / trials;
  const double sigma = std::sqrt(exact_alarm * (1.0 - exact_alarm) / trials);
  CHECK(std::abs(freq - exact_alarm) <= 4.0 * sigma + 1e-4);
}

TEST_CASE("detector roc: extremes and bound domination") {
  const BinaryInputDmc willie = bsc(0.45);
  const RocPair far = detector_roc(10, 3, willie, 1e9);
  CHECK(far.exact.false_alarm == doctest::Approx(0.0));
  CHECK(far.exact.missed_detection == doctest::Approx(1.0));

  const DetectorConstants d = detector_constants(willie);
  for (std::int64_t n : {6, 10, 14}) {
    for (std::int64_t w : {1, 2, 3}) {
      const double tau = static_cast<double>(n) * d.mu0 + 0.5 * w * (d.mu1 - d.mu0);
      const RocPair roc = detector_roc(n, w, willie, tau);
      CHECK(roc.exact.false_alarm <= roc.bound.false_alarm + 1e-12);
      CHECK(roc.exact.missed_detection <= roc.bound.missed_detection + 1e-12);
    }
  }
}

TEST_CASE("detector roc test is dominated by exact total variation") {
  // 1 - alpha - beta of any test lower-bounds the total variation.
  const BinaryInputDmc willie = bsc(0.45);
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    const std::int64_t n = 6 + static_cast<std::int64_t>(uniform_below(rng, 5));
    const std::int64_t ell = 1 + static_cast<std::int64_t>(uniform_below(rng, 2));
    const PpmParams params = make_ppm(n, ell);
    const Codebook code = generate_codebook(params, 4, 1, mix_seed(900, trial));
    const FiniteDistribution induced = induced_output_distribution(code, willie);
    const FiniteDistribution q_prod = verification::product_distribution(willie.off, n);
    const double tv = total_variation(induced, q_prod);

    const DetectorConstants d = detector_constants(willie);
    const double tau = 0.5 * static_cast<double>(ell) * (d.mu1 - d.mu0);
    const RocPair roc = detector_roc(n, ell, willie, tau);
    CHECK(1.0 - roc.exact.false_alarm - roc.exact.missed_detection <= tv + 1e-12);
  }
}

TEST_CASE("tv lower bound from the minimum weight") {
  const BinaryInputDmc willie = bsc(0.45);
  // w = 0 is vacuous.
  CHECK(tv_lower_bound_from_wmin(10, 0, willie) <= 0.0);
  // Nondecreasing in w beyond the vacuous regime.
  double prev = -1e9;
  for (std::int64_t w = 0; w <= 200; w += 20) {
    const double b = tv_lower_bound_from_wmin(400, w, willie);
    CHECK(b >= prev - 1e-12);
    prev = b;
  }
  // Valid (if loose) against the exact TV of tiny single-weight codebooks.
  const PpmParams params = make_ppm(10, 3);
  const Codebook code = generate_codebook(params, 4, 1, 5);
  const FiniteDistribution induced = induced_output_distribution(code, willie);
  const FiniteDistribution q_prod = verification::product_distribution(willie.off, 10);
  CHECK(tv_lower_bound_from_wmin(10, 3, willie) <= total_variation(induced, q_prod));
}

TEST_CASE("beta upper bound from the minimum weight") {
  const BinaryInputDmc willie = bsc(0.45);
  CHECK_THROWS_AS(beta_upper_bound_from_wmin(16, 0, 0.5, willie), PreconditionViolation);
  CHECK_THROWS_AS(beta_upper_bound_from_wmin(100, 2, 0.2, willie), PreconditionViolation);

  // Valid against the exact beta of tiny single-weight codebooks.
  const PpmParams params = make_ppm(9, 3);
  const Codebook code = generate_codebook(params, 4, 1, 11);
  const FiniteDistribution induced = induced_output_distribution(code, willie);
  const FiniteDistribution q_prod = verification::product_distribution(willie.off, 9);
  // At n = 9 the precondition w > sqrt(n) Q^{-1}(alpha)/sqrt(chi2) needs
  // alpha >= 1/2 for w = 3.
  for (double alpha : {0.5, 0.7}) {
    const double exact = verification::beta_between_enumerated(q_prod, induced, alpha).beta;
    CHECK(exact <= beta_upper_bound_from_wmin(9, 3, alpha, willie));
  }

  // Full-weight codewords at growing n: the bound trends to zero.
  double prev = 1e9;
  for (std::int64_t n : {100, 10000, 1000000}) {
    const double b = beta_upper_bound_from_wmin(n, n, 0.3, willie);
    CHECK(b < prev);
    prev = b;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("single-weight converse on log M") {
  const ChannelConstants c = channel_constants(fig2_channel());
  // epsilon = 1/2 with the plain form: the dispersion term vanishes.
  const ConverseValue half = converse_logM_from_weight(1000.0, 0.5, c, 1e6);
  CHECK_FALSE(half.be_corrected);
  const double be = 6.0 * c.t_p / std::pow(c.v_p, 1.5);
  CHECK(half.point ==
        doctest::Approx(1000.0 * c.d_p - std::log(be / std::sqrt(1000.0))).epsilon(1e-12));

  // Monotone nondecreasing in w.
  double prev = -1e30;
  for (double w : {10.0, 30.0, 100.0, 300.0, 1000.0, 10000.0}) {
    const double v = converse_logM_from_weight(w, 1e-3, c, 1e6).point;
    CHECK(v >= prev);
    prev = v;
  }
  CHECK_THROWS_AS(converse_logM_from_weight(0.5, 1e-3, c, 1e6), InfeasibleWeight);

  // Cross-module consistency at matching pulse count: the planner stays below.
  const double n = 23131.0;
  const CodePlan plan = plan_D(n, 1e-3, 0.01, 0.1, c);
  const ConverseValue conv = converse_logM_from_weight(plan.ell, 1e-3, c, n);
  CHECK(plan.log_m <= conv.point);
}

TEST_CASE("weight caps per metric") {
  const ChannelConstants c = channel_constants(fig2_channel());
  const DetectorConstants d = detector_constants(fig2_channel().willie());

  // KL cap at large n approaches sqrt(2 delta / chi2).
  CHECK(weight_bound_D(0.01, 1e12, c, d) ==
        doctest::Approx(std::sqrt(2.0 * 0.01 / c.chi2_q)).epsilon(1e-4));
  CHECK(weight_bound_D(0.01, 1e12, c, d) == doctest::Approx(0.7036).epsilon(1e-3));

  // V cap at gamma = 0, n large: (2/sqrt(chi2)) Q^{-1}((1-delta)/2).
  CHECK(weight_bound_V(0.01, 1e12, 0.0, c, d) ==
        doctest::Approx(2.0 / std::sqrt(c.chi2_q) * q_inverse(0.495)).epsilon(1e-3));

  // Nondecreasing in gamma (a larger kept fraction can only loosen the cap)
  // and nondecreasing in delta.
  double prev = -1e30;
  for (double gamma : {0.0, 0.05, 0.1, 0.2}) {
    const double v = weight_bound_V(0.1, 1e8, gamma, c, d);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  prev = -1e30;
  for (double delta : {0.01, 0.05, 0.1, 0.3}) {
    const double v = weight_bound_V(delta, 1e8, 0.0, c, d);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  prev = -1e30;
  for (double delta : {0.01, 0.05, 0.1, 0.3}) {
    const double v = weight_bound_beta(delta, 0.2, 1e8, 0.0, c, d);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  CHECK_THROWS_AS(weight_bound_V(0.999999, 1e4, 0.9, c, d), DomainError);

  // At alpha = (1-delta)/2 the beta cap matches the V cap asymptotically.
  const double delta = 0.05;
  const double alpha = 0.5 * (1.0 - delta);
  CHECK(weight_bound_beta(delta, alpha, 1e12, 0.0, c, d) ==
        doctest::Approx(weight_bound_V(delta, 1e12, 0.0, c, d)).epsilon(1e-4));
}

TEST_CASE("second-order converse per metric") {
  const ChannelConstants c = channel_constants(fig2_channel());
  const DetectorConstants d = detector_constants(fig2_channel().willie());

  // Matches the KL-metric second-order display up to the explicit log term.
  const double n = 1e6;
  const ConverseValue kl = converse_secondorder(CovertMetric::KL, n, 1e-3, 0.01, 0.2, c, d);
  const double g = std::sqrt(2.0 * 0.01 / c.chi2_q);
  const double display = g * c.d_p * 1000.0 - std::sqrt(g * c.v_p) * q_inverse(1e-3) *
                                                  std::pow(n, 0.25);
  CHECK(kl.point - display >= 0.0);          // the log term is positive here
  CHECK(kl.point - display <= std::log(std::sqrt(n) * g) + 5.0);

  // epsilon = 1/2: no n^{1/4} term.
  const ConverseValue half = converse_secondorder(CovertMetric::KL, n, 0.5, 0.01, 0.2, c, d);
  CHECK(half.point - g * c.d_p * 1000.0 ==
        doctest::Approx(kl.point - display).epsilon(1e-9));

  // Sandwich against the planners at all grid blocklengths.
  for (double nn : {1e3, 1e4, 1e5, 1e6}) {
    CHECK(plan_D(nn, 1e-3, 0.01, 0.1, c).log_m <=
          converse_secondorder(CovertMetric::KL, nn, 1e-3, 0.01, 0.2, c, d).point);
    CHECK(plan_V(nn, 1e-3, 0.01, 0.1, c).log_m <=
          converse_secondorder(CovertMetric::TV, nn, 1e-3, 0.01, 0.2, c, d).point);
    CHECK(plan_beta(nn, 1e-3, 0.01, 0.2, 0.1, c).log_m <=
          converse_secondorder(CovertMetric::BETA, nn, 1e-3, 0.01, 0.2, c, d).point);
  }
}
