#include "covert/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "covert/gaussian.hpp"
#include "covert/rng.hpp"

namespace covert::verification {

bool SuiteReport::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::vector<std::string> suite_names() {
  return {"exact-oracles", "concentration", "sandwich", "moments"};
}

FiniteDistribution product_distribution(const FiniteDistribution& base, std::int64_t n,
                                        std::size_t cap) {
  const std::size_t k = base.size();
  double total = 1.0;
  for (std::int64_t i = 0; i < n; ++i) {
    total *= static_cast<double>(k);
    if (total > static_cast<double>(cap)) throw CombinatorialBlowup("product space exceeds cap");
  }
  const std::size_t words = static_cast<std::size_t>(total);
  std::vector<double> probs(words, 0.0);
  for (std::size_t z = 0; z < words; ++z) {
    std::size_t c = z;
    double p = 1.0;
    for (std::int64_t i = 0; i < n; ++i) {
      p *= base.prob(c % k);
      c /= k;
    }
    probs[z] = p;
  }
  std::vector<int> labels(words);
  for (std::size_t z = 0; z < words; ++z) labels[z] = static_cast<int>(z);
  return FiniteDistribution(std::move(labels), std::move(probs));
}

FiniteDistribution ppm_output_distribution_enumerated(const BinaryInputDmc& willie,
                                                      const PpmParams& params, std::size_t cap) {
  const std::size_t zs = willie.output_size();
  double total = 1.0;
  for (std::int64_t i = 0; i < params.n; ++i) {
    total *= static_cast<double>(zs);
    if (total > static_cast<double>(cap)) throw CombinatorialBlowup("product space exceeds cap");
  }
  double patterns = 1.0;
  for (std::int64_t i = 0; i < params.ell; ++i) patterns *= static_cast<double>(params.m);
  if (patterns > 1e6) throw CombinatorialBlowup("too many pulse patterns");

  const std::size_t words = static_cast<std::size_t>(total);
  const std::size_t npat = static_cast<std::size_t>(patterns);
  const double weight = 1.0 / patterns;
  std::vector<double> probs(words, 0.0);
  std::vector<std::size_t> digits(static_cast<std::size_t>(params.n));
  std::vector<std::int64_t> offsets(static_cast<std::size_t>(params.ell));
  for (std::size_t z = 0; z < words; ++z) {
    std::size_t c = z;
    for (std::size_t i = 0; i < digits.size(); ++i) {
      digits[i] = c % zs;
      c /= zs;
    }
    double acc = 0.0;
    for (std::size_t pat = 0; pat < npat; ++pat) {
      std::size_t pc = pat;
      for (std::size_t b = 0; b < offsets.size(); ++b) {
        offsets[b] = static_cast<std::int64_t>(pc % static_cast<std::size_t>(params.m));
        pc /= static_cast<std::size_t>(params.m);
      }
      double prod = 1.0;
      for (std::int64_t i = 0; i < params.n; ++i) {
        const std::int64_t block = i / params.m;
        const bool on = block < params.ell && i % params.m == offsets[static_cast<std::size_t>(block)];
        prod *= on ? willie.on.prob(digits[static_cast<std::size_t>(i)])
                   : willie.off.prob(digits[static_cast<std::size_t>(i)]);
        if (prod == 0.0) break;
      }
      acc += prod;
    }
    probs[z] = weight * acc;
  }
  std::vector<int> labels(words);
  for (std::size_t z = 0; z < words; ++z) labels[z] = static_cast<int>(z);
  return FiniteDistribution(std::move(labels), std::move(probs));
}

BetaResult beta_between_enumerated(const FiniteDistribution& null_dist,
                                   const FiniteDistribution& alt_dist, double alpha) {
  // Group atoms by log-ratio, then the standard class reduction.
  struct Entry {
    double llr;
    double p;
    double q;
  };
  std::vector<Entry> entries;
  entries.reserve(null_dist.size());
  for (std::size_t i = 0; i < null_dist.size(); ++i) {
    const double p = null_dist.prob(i);
    const double q = alt_dist.prob(i);
    if (p == 0.0 && q == 0.0) continue;
    const double llr = p == 0.0   ? std::numeric_limits<double>::infinity()
                       : q == 0.0 ? -std::numeric_limits<double>::infinity()
                                  : std::log(q / p);
    entries.push_back({llr, p, q});
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.llr < b.llr; });
  std::vector<RatioClass> classes;
  for (std::size_t i = 0; i < entries.size();) {
    RatioClass c{0.0, 0.0};
    const double v = entries[i].llr;
    std::size_t j = i;
    for (; j < entries.size(); ++j) {
      const double u = entries[j].llr;
      const bool same = (std::isinf(v) && u == v) ||
                        (!std::isinf(v) && !std::isinf(u) &&
                         std::abs(u - v) <= kValueMergeTol * std::max(1.0, std::abs(v)));
      if (!same) break;
      c.null_mass += entries[j].p;
      c.alt_mass += entries[j].q;
    }
    classes.push_back(c);
    i = j;
  }
  return beta_alpha_classes(std::move(classes), alpha);
}

BinaryInputDmc random_two_sided_dmc(std::mt19937_64& rng, std::size_t max_z) {
  const std::size_t zs = 2 + uniform_below(rng, max_z - 1);
  auto draw_row = [&]() {
    std::vector<double> p(zs);
    double sum = 0.0;
    for (auto& v : p) {
      v = 0.05 + unit_double(rng);
      sum += v;
    }
    for (auto& v : p) v /= sum;
    return p;
  };
  for (;;) {
    std::vector<double> q0 = draw_row();
    std::vector<double> q1 = draw_row();
    double dist = 0.0;
    for (std::size_t z = 0; z < zs; ++z) dist += std::abs(q0[z] - q1[z]);
    if (dist < 0.05) continue;  // keep Q1 clearly distinct from Q0
    return BinaryInputDmc(FiniteDistribution::from_probs(std::move(q0)),
                          FiniteDistribution::from_probs(std::move(q1)));
  }
}

namespace {

void push(SuiteReport& report, std::string name, bool pass, double slack, std::string mode) {
  report.checks.push_back({std::move(name), pass, slack, std::move(mode)});
}

SuiteReport suite_exact_oracles(std::uint64_t seed) {
  SuiteReport report{"exact-oracles", {}, };
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < 20; ++trial) {
    const BinaryInputDmc willie = random_two_sided_dmc(rng, 4);
    const std::size_t zs = willie.output_size();
    // Keep |Z|^n around a million at most, biased toward the larger n.
    const std::int64_t n_min = zs == 2 ? 9 : zs == 3 ? 7 : 6;
    const std::int64_t n_max = zs == 2 ? 10 : zs == 3 ? 9 : 8;
    const std::int64_t n = n_min + static_cast<std::int64_t>(uniform_below(
                                       rng, static_cast<std::uint64_t>(n_max - n_min + 1)));
    const std::int64_t ell = 1 + static_cast<std::int64_t>(uniform_below(rng, 4));
    const PpmParams params = make_ppm(n, std::min<std::int64_t>(ell, n));

    const FiniteDistribution p_enum = ppm_output_distribution_enumerated(willie, params);
    const FiniteDistribution q_prod = product_distribution(willie.off, n);

    const double kl_block = ppm_divergence_exact(willie, params);
    const double kl_enum = kl_divergence(p_enum, q_prod);
    const double tv_block = ppm_tv_exact(willie, params);
    const double tv_enum = total_variation(p_enum, q_prod);
    const double alpha = 0.2;
    const double beta_block = ppm_beta_exact(willie, params, alpha).beta;
    const double beta_enum = beta_between_enumerated(q_prod, p_enum, alpha).beta;

    const std::string tag = "channel " + std::to_string(trial) + " (|Z|=" + std::to_string(zs) +
                            ", n=" + std::to_string(n) + ", ell=" + std::to_string(params.ell) + ")";
    push(report, "KL block vs enumeration, " + tag, std::abs(kl_block - kl_enum) <= 1e-10,
         1e-10 - std::abs(kl_block - kl_enum), "exact");
    push(report, "TV block vs enumeration, " + tag, std::abs(tv_block - tv_enum) <= 1e-10,
         1e-10 - std::abs(tv_block - tv_enum), "exact");
    push(report, "beta block vs enumeration, " + tag, std::abs(beta_block - beta_enum) <= 1e-10,
         1e-10 - std::abs(beta_block - beta_enum), "exact");
  }
  return report;
}

SuiteReport suite_moments(std::uint64_t seed) {
  SuiteReport report{"moments", {}};
  std::mt19937_64 rng(seed);
  std::vector<BinaryInputDmc> channels;
  channels.push_back(bsc(0.45));
  channels.push_back(random_two_sided_dmc(rng, 3));
  channels.push_back(random_two_sided_dmc(rng, 4));

  for (std::size_t ci = 0; ci < channels.size(); ++ci) {
    const BinaryInputDmc& ch = channels[ci];
    const double chi2 = chi_squared(ch.on, ch.off);
    const std::string tag = " [channel " + std::to_string(ci) + "]";

    // Exact identities for m in 2..12.
    double worst_eb = 0, worst_eb2 = 0, worst_ebt = 0;
    for (std::int64_t m = 2; m <= 12; ++m) {
      const PpmMoments mm = ppm_moments(ch, m);
      worst_eb = std::max(worst_eb, std::abs(mm.exact_null.e_b));
      worst_eb2 = std::max(worst_eb2, std::abs(mm.exact_null.e_b2 - chi2 / static_cast<double>(m)));
      worst_ebt = std::max(worst_ebt, std::abs(mm.exact_ppm.e_b - chi2 / static_cast<double>(m)));
    }
    push(report, "E[B] = 0 exact, m=2..12" + tag, worst_eb <= 1e-12, 1e-12 - worst_eb, "exact");
    push(report, "E[B^2] = chi2/m exact, m=2..12" + tag, worst_eb2 <= 1e-12, 1e-12 - worst_eb2,
         "exact");
    push(report, "E[Btilde] = chi2/m exact, m=2..12" + tag, worst_ebt <= 1e-12, 1e-12 - worst_ebt,
         "exact");

    // O(1/m^k) statements: fit the constant on m in 4..16, check it extrapolates
    // to m in 17..20.
    struct OCheck {
      const char* name;
      double k;
      bool tilted;
      double MomentSet::*field;
      bool inequality;  // exact <= closed + K/m^k
    };
    const std::vector<OCheck> ochecks = {
        {"E[B^3] gap O(1/m^2)", 2.0, false, &MomentSet::e_b3, false},
        {"E[B^4] gap O(1/m^3)", 3.0, false, &MomentSet::e_b4, false},
        {"E[C] gap O(1/m^2)", 2.0, false, &MomentSet::e_c, false},
        {"Var[C] gap O(1/m^2)", 2.0, false, &MomentSet::var_c, false},
        {"E|C-EC|^3 within O(1/m^{9/4}) of bound", 2.25, false, &MomentSet::third_abs_c, true},
        {"E[Btilde^2] gap O(1/m^2)", 2.0, true, &MomentSet::e_b2, false},
        {"E[Btilde^4] gap O(1/m^3)", 3.0, true, &MomentSet::e_b4, false},
        {"E[Ctilde] gap O(1/m^2)", 2.0, true, &MomentSet::e_c, false},
        {"Var[Ctilde] gap O(1/m^2)", 2.0, true, &MomentSet::var_c, false},
    };
    for (const auto& oc : ochecks) {
      double fit = 0.0;
      for (std::int64_t m = 4; m <= 16; ++m) {
        const PpmMoments mm = ppm_moments(ch, m);
        const MomentSet& gap = oc.tilted ? mm.gap_ppm : mm.gap_null;
        double g = gap.*(oc.field);
        if (oc.inequality) g = std::max(0.0, g);  // one-sided: exact above the bound
        fit = std::max(fit, std::abs(g) * std::pow(static_cast<double>(m), oc.k));
      }
      double worst_excess = -std::numeric_limits<double>::infinity();
      for (std::int64_t m = 17; m <= 20; ++m) {
        const PpmMoments mm = ppm_moments(ch, m);
        const MomentSet& gap = oc.tilted ? mm.gap_ppm : mm.gap_null;
        double g = gap.*(oc.field);
        if (oc.inequality) g = std::max(0.0, g);
        worst_excess = std::max(
            worst_excess, std::abs(g) * std::pow(static_cast<double>(m), oc.k) - 1.05 * fit - 1e-13);
      }
      push(report, std::string(oc.name) + tag, worst_excess <= 0.0, -worst_excess, "exact");
    }
  }
  return report;
}

SuiteReport suite_concentration(std::uint64_t seed) {
  SuiteReport report{"concentration", {}};
  const CovertChannelPair channel = CovertChannelPair::from_bsc(0.11, 0.45);
  const PpmParams params = make_ppm(4, 2);
  const std::int64_t m_messages = 8, k_keys = 2;
  const double mk = static_cast<double>(m_messages * k_keys);
  const int books = 2000;

  const FiniteDistribution target = ppm_output_distribution_enumerated(channel.willie(), params);
  const double mu_zn = target.min_positive_prob();

  std::vector<double> kls;
  kls.reserve(books);
  double mean = 0.0;
  for (int b = 0; b < books; ++b) {
    const Codebook code = generate_codebook(params, m_messages, k_keys, mix_seed(seed, b));
    const FiniteDistribution induced = induced_output_distribution(code, channel.willie());
    const double kl = kl_divergence(induced, target);
    kls.push_back(kl);
    mean += kl;
  }
  mean /= books;
  double var = 0.0;
  for (double v : kls) var += (v - mean) * (v - mean);
  var /= books - 1;
  const double se = std::sqrt(var / books);

  // Soft-covering bound on E KL, minimized over a gamma grid.
  double best_bound = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 40; ++i) {
    const double gamma2 = -1.0 + 0.05 * i;
    best_bound = std::min(best_bound, resolvability_expectation_bound(
                                          gamma2, mk, mu_zn, channel.willie(), params));
  }
  push(report, "mean KL <= resolvability bound + 3 SE", mean <= best_bound + 3.0 * se,
       best_bound + 3.0 * se - mean, "monte-carlo");

  // McDiarmid exceedance at a 10-point lambda grid, one-sided 95% CI.
  const BoundedDifferenceConstants bd = bounded_difference_constants(mk, 16.0, mu_zn);
  for (int i = 1; i <= 10; ++i) {
    const double lambda = 0.02 * i;
    const double tail = mcdiarmid_tail(lambda, mk, bd.c_kl);
    int exceed = 0;
    for (double v : kls) {
      if (v - mean >= lambda) ++exceed;
    }
    const double freq = static_cast<double>(exceed) / books;
    const double ci_low = freq - 1.645 * std::sqrt(std::max(freq * (1.0 - freq), 1e-12) /
                                                   static_cast<double>(books));
    push(report, "McDiarmid exceedance lambda=" + std::to_string(lambda), ci_low <= tail,
         tail - ci_low, "monte-carlo");
  }
  return report;
}

SuiteReport suite_sandwich(std::uint64_t seed) {
  SuiteReport report{"sandwich", {}};
  const CovertChannelPair channel = CovertChannelPair::from_bsc(0.11, 0.45);
  const ChannelConstants cc = channel_constants(channel);
  const DetectorConstants dc = detector_constants(channel.willie());
  const double eps = 1e-3, delta = 1e-2, alpha = 0.2, rho = 0.1;

  for (double n : {1e3, 1e4, 1e5, 1e6}) {
    const CodePlan pd = plan_D(n, eps, delta, rho, cc);
    const ConverseValue cd = converse_secondorder(CovertMetric::KL, n, eps, delta, alpha, cc, dc);
    push(report, "plan_D <= converse, n=" + std::to_string(static_cast<long long>(n)),
         pd.log_m <= cd.point, cd.point - pd.log_m, "bound");
    const CodePlan pv = plan_V(n, eps, delta, rho, cc);
    const ConverseValue cv = converse_secondorder(CovertMetric::TV, n, eps, delta, alpha, cc, dc);
    push(report, "plan_V <= converse, n=" + std::to_string(static_cast<long long>(n)),
         pv.log_m <= cv.point, cv.point - pv.log_m, "bound");
    const CodePlan pb = plan_beta(n, eps, delta, alpha, rho, cc);
    const ConverseValue cb =
        converse_secondorder(CovertMetric::BETA, n, eps, delta, alpha, cc, dc);
    push(report, "plan_beta <= converse, n=" + std::to_string(static_cast<long long>(n)),
         pb.log_m <= cb.point, cb.point - pb.log_m, "bound");
  }

  // Exact detector vs exact TV on tiny single-weight codebooks.
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < 6; ++trial) {
    const std::int64_t n = 6 + static_cast<std::int64_t>(uniform_below(rng, 7));  // 6..12
    const std::int64_t ell = 1 + static_cast<std::int64_t>(uniform_below(rng, 2));
    const PpmParams params = make_ppm(n, ell);
    const std::int64_t m_messages = 4;
    const Codebook code = generate_codebook(params, m_messages, 1, mix_seed(seed, 100 + trial));
    const FiniteDistribution induced = induced_output_distribution(code, channel.willie());
    const FiniteDistribution q_prod = product_distribution(channel.willie().off, n);
    const double tv = total_variation(induced, q_prod);

    // beta of the mixture at the midpoint threshold; all codewords have weight ell.
    const double tau = 0.5 * static_cast<double>(ell) * (dc.mu1 - dc.mu0) +
                       static_cast<double>(n) * dc.mu0;
    const SumDistribution null_law = detector_statistic_law(n, 0, channel.willie());
    const double fa = null_law.tail_gt(tau);
    double md = 0.0;
    for (const auto& cw : code.codewords) {
      const SumDistribution law =
          detector_statistic_law(n, static_cast<std::int64_t>(cw.size()), channel.willie());
      md += law.cdf(tau);
    }
    md /= static_cast<double>(code.codewords.size());
    push(report, "1 - alpha - beta <= exact TV, trial " + std::to_string(trial),
         1.0 - fa - md <= tv + 1e-12, tv - (1.0 - fa - md), "exact");
  }
  return report;
}

}  // namespace

SuiteReport run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "exact-oracles") return suite_exact_oracles(seed);
  if (name == "concentration") return suite_concentration(seed);
  if (name == "sandwich") return suite_sandwich(seed);
  if (name == "moments") return suite_moments(seed);
  throw UnknownSuite("unknown verification suite: " + name);
}

}  // namespace covert::verification
