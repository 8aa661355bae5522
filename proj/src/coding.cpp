#include "covert/coding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "covert/gaussian.hpp"
#include "covert/rng.hpp"

namespace covert {

std::optional<std::int64_t> Codebook::common_weight() const {
  if (codewords.empty()) return std::nullopt;
  const std::int64_t w = static_cast<std::int64_t>(codewords.front().size());
  for (const auto& cw : codewords) {
    if (static_cast<std::int64_t>(cw.size()) != w) return std::nullopt;
  }
  return w;
}

void Codebook::validate() const {
  if (n < 1 || m_messages < 1 || k_keys < 1) throw InvalidParams("bad codebook dimensions");
  if (static_cast<std::int64_t>(codewords.size()) != m_messages * k_keys) {
    throw InvalidParams("codeword count does not match M*K");
  }
  for (const auto& cw : codewords) {
    for (std::size_t i = 0; i < cw.size(); ++i) {
      if (cw[i] < 1 || cw[i] > n) throw InvalidParams("pulse index outside [1, n]");
      if (i > 0 && cw[i] <= cw[i - 1]) throw InvalidParams("pulse indices must be sorted");
    }
  }
}

Codebook generate_codebook(const PpmParams& params, std::int64_t m_messages, std::int64_t k_keys,
                           std::uint64_t seed) {
  if (m_messages < 1 || k_keys < 1) throw InvalidParams("need M*K >= 1");
  Codebook code;
  code.n = params.n;
  code.m_messages = m_messages;
  code.k_keys = k_keys;
  code.ell = params.ell;
  code.codewords.reserve(static_cast<std::size_t>(m_messages * k_keys));
  std::mt19937_64 rng(seed);
  for (std::int64_t i = 0; i < m_messages * k_keys; ++i) {
    code.codewords.push_back(sample_ppm_codeword(params, rng));
  }
  code.validate();
  return code;
}

std::string serialize_codebook(const Codebook& code) {
  std::ostringstream out;
  out << "n,M,K,ell\n"
      << code.n << ',' << code.m_messages << ',' << code.k_keys << ',' << code.ell << '\n';
  for (const auto& cw : code.codewords) {
    for (std::size_t i = 0; i < cw.size(); ++i) {
      if (i > 0) out << ',';
      out << cw[i];
    }
    out << '\n';
  }
  return out.str();
}

namespace {

std::vector<std::int64_t> parse_int_line(const std::string& line) {
  std::vector<std::int64_t> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    std::size_t next = line.find(',', pos);
    if (next == std::string::npos) next = line.size();
    const std::string tok = line.substr(pos, next - pos);
    if (!tok.empty()) out.push_back(std::stoll(tok));
    pos = next + 1;
  }
  return out;
}

}  // namespace

Codebook parse_codebook(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "n,M,K,ell") {
    throw InvalidParams("missing codebook header");
  }
  if (!std::getline(in, line)) throw InvalidParams("missing codebook dimensions");
  const auto dims = parse_int_line(line);
  if (dims.size() != 4) throw InvalidParams("bad codebook dimensions line");
  Codebook code;
  code.n = dims[0];
  code.m_messages = dims[1];
  code.k_keys = dims[2];
  code.ell = dims[3];
  for (std::int64_t i = 0; i < code.m_messages * code.k_keys; ++i) {
    if (!std::getline(in, line)) throw InvalidParams("truncated codebook");
    code.codewords.push_back(parse_int_line(line));
  }
  code.validate();
  return code;
}

std::optional<std::int64_t> threshold_decode(const Codebook& code, std::int64_t key,
                                             std::span<const int> y, double gamma,
                                             const CovertChannelPair& channel) {
  if (key < 0 || key >= code.k_keys) throw InvalidParams("key index out of range");
  if (static_cast<std::int64_t>(y.size()) != code.n) throw InvalidParams("output length != n");
  const std::span<const double> llr = channel.bob_llr();
  std::optional<std::int64_t> found;
  for (std::int64_t w = 0; w < code.m_messages; ++w) {
    double score = 0.0;
    for (const std::int64_t pos : code.word(key, w)) {
      score += llr[static_cast<std::size_t>(y[static_cast<std::size_t>(pos - 1)])];
    }
    if (score > gamma) {
      if (found) return std::nullopt;  // not unique
      found = w;
    }
  }
  return found;
}

ErrorBounds error_expectation_bounds(const CovertChannelPair& channel, const PpmParams& params,
                                     std::int64_t m_messages, double gamma, std::size_t cap) {
  ErrorBounds out;
  const TailWithBound f = f_xy_bound(channel.bob(), params.ell, gamma, cap);
  if (!f.exact) throw CombinatorialBlowup("exact F_XY law exceeds cap");
  out.eps1_expectation = *f.exact;
  out.eps2_bound = static_cast<double>(m_messages) * std::exp(-gamma) *
                   ppm_ratio_expectation(channel.bob(), params).exact;
  return out;
}

FiniteDistribution induced_output_distribution(const Codebook& code, const BinaryInputDmc& willie,
                                               std::size_t cap) {
  const std::size_t zs = willie.output_size();
  double total = 1.0;
  for (std::int64_t i = 0; i < code.n; ++i) {
    total *= static_cast<double>(zs);
    if (total > static_cast<double>(cap)) {
      throw CombinatorialBlowup("output space exceeds enumeration cap");
    }
  }
  const std::size_t words = static_cast<std::size_t>(total);
  const double weight = 1.0 / static_cast<double>(code.codewords.size());
  std::vector<double> probs(words, 0.0);
  std::vector<std::size_t> digits(static_cast<std::size_t>(code.n));
  for (std::size_t z = 0; z < words; ++z) {
    std::size_t c = z;
    for (std::size_t i = 0; i < digits.size(); ++i) {
      digits[i] = c % zs;
      c /= zs;
    }
    double p = 0.0;
    for (const auto& cw : code.codewords) {
      double prod = 1.0;
      std::size_t next_pulse = 0;
      for (std::size_t i = 0; i < digits.size(); ++i) {
        const bool on = next_pulse < cw.size() &&
                        cw[next_pulse] == static_cast<std::int64_t>(i) + 1;
        if (on) ++next_pulse;
        prod *= on ? willie.on.prob(digits[i]) : willie.off.prob(digits[i]);
        if (prod == 0.0) break;
      }
      p += prod;
    }
    probs[z] = weight * p;
  }
  std::vector<int> labels(words);
  for (std::size_t z = 0; z < words; ++z) labels[z] = static_cast<int>(z);
  return FiniteDistribution(std::move(labels), std::move(probs));
}

double resolvability_expectation_bound(double gamma2, double mk, double mu_z_n,
                                       const BinaryInputDmc& willie, const PpmParams& params,
                                       std::size_t cap) {
  if (mk < 1.0) throw InvalidParams("need MK >= 1");
  const TailWithBound f = f_xz_exact_or_bound(willie, params, gamma2, cap);
  const double fbar = f.exact ? *f.exact : f.bound;
  return std::log(1.0 / mu_z_n + 1.0) * fbar + std::exp(gamma2) / mk;
}

BoundedDifferenceConstants bounded_difference_constants(double m_total, double alphabet_size,
                                                        double mu) {
  return bounded_difference_constants_log(m_total, std::log(alphabet_size), std::log(mu));
}

BoundedDifferenceConstants bounded_difference_constants_log(double m_total, double log_alphabet,
                                                            double log_mu) {
  if (m_total < 2.0) throw InvalidParams("bounded differences need M >= 2 codewords");
  BoundedDifferenceConstants out;
  out.c_tv = 1.0 / m_total;
  out.c_kl = (std::log(m_total) + log_alphabet - 2.0 * log_mu) / m_total;
  return out;
}

double mcdiarmid_tail(double lambda, double m_total, double c) {
  if (!(c > 0.0)) throw InvalidParams("bounded difference must be positive");
  if (lambda <= 0.0) return 1.0;
  return std::exp(-2.0 * lambda * lambda / (m_total * c * c));
}

OneShotCertificate existence_certificate(double m_messages, double k_keys,
                                         const OneShotLambdas& lambdas, double gamma1,
                                         double gamma2, const CovertChannelPair& channel,
                                         const PpmParams& params, std::size_t cap) {
  if (!(m_messages >= 1.0 && k_keys >= 1.0)) throw InvalidParams("need M, K >= 1");
  return existence_certificate_log(std::log(m_messages), std::log(k_keys), lambdas, gamma1,
                                   gamma2, channel, params, cap);
}

OneShotCertificate existence_certificate_log(double log_m, double log_k,
                                             const OneShotLambdas& lambdas, double gamma1,
                                             double gamma2, const CovertChannelPair& channel,
                                             const PpmParams& params, std::size_t cap) {
  if (!(lambdas.lambda1 > 0.0 && lambdas.lambda2 > 0.0 && lambdas.lambda3 > 0.0)) {
    throw InvalidParams("lambdas must be positive");
  }
  OneShotCertificate cert;
  cert.gamma1 = gamma1;
  cert.gamma2 = gamma2;
  cert.lambda1 = lambdas.lambda1;
  cert.lambda2 = lambdas.lambda2;
  cert.lambda3 = lambdas.lambda3;

  const double log_mk = log_m + log_k;
  const TailWithBound f = f_xy_bound(channel.bob(), params.ell, gamma1, cap);
  const double eps1 = f.exact ? *f.exact : f.bound;
  // (M / e^gamma1) E[P_Y/Q_Y], kept in logs until the end.
  const double log_ratio = std::log(ppm_ratio_expectation(channel.bob(), params).exact);
  const double log_eps2 = log_m - gamma1 + log_ratio;
  const double eps2 = log_eps2 > 700.0 ? std::numeric_limits<double>::infinity()
                                       : std::exp(log_eps2);
  cert.reliability_bound = eps1 + lambdas.lambda1 + lambdas.lambda2 * eps2;

  const double log_mu_zn = ppm_min_log_prob(channel.willie(), params, cap);
  const TailWithBound fz = f_xz_exact_or_bound(channel.willie(), params, gamma2, cap);
  const double fbar = fz.exact ? *fz.exact : fz.bound;
  const double log_e_gamma_over_mk = gamma2 - log_mk;
  // log(1/mu + 1) = -log mu up to e^{log mu} once mu is small.
  const double neg_log_mu = -log_mu_zn;
  const double log_inv_mu_p1 = neg_log_mu > 30.0 ? neg_log_mu : std::log1p(std::exp(neg_log_mu));
  cert.resolvability_bound =
      log_inv_mu_p1 * fbar +
      (log_e_gamma_over_mk > 700.0 ? std::numeric_limits<double>::infinity()
                                   : std::exp(log_e_gamma_over_mk)) +
      lambdas.lambda3;

  // The K-th power form below lower-bounds P(E1) + P(E2) - 1 for the
  // reliability and resolvability events. All count-dependent exponents are
  // assembled in log space so astronomically large M, K stay finite.
  const double log_2m_l1 = std::log(2.0) + log_m + 2.0 * std::log(lambdas.lambda1);
  const double rel_exp = log_2m_l1 > 7.0 ? 0.0 : std::exp(-std::exp(log_2m_l1));
  const double base = 1.0 - rel_exp - 1.0 / lambdas.lambda2;
  const double log_l = log_mk +
                       static_cast<double>(params.n) *
                           std::log(static_cast<double>(channel.willie().output_size())) -
                       2.0 * log_mu_zn;
  const double log_mc = std::log(2.0) + log_mk + 2.0 * std::log(lambdas.lambda3) -
                        2.0 * std::log(log_l);
  const double mc_term = log_mc > 7.0 ? 0.0 : std::exp(-std::exp(log_mc));
  double powered = 0.0;
  if (base > 0.0) {
    // base^K = exp(-K (-log base)) via t = log K + log(-log base).
    const double neg_log_base = -std::log(base);
    if (neg_log_base == 0.0) {
      powered = 1.0;
    } else {
      const double t = log_k + std::log(neg_log_base);
      powered = t > 7.0 ? 0.0 : std::exp(-std::exp(t));
    }
  }
  cert.existence_margin = (base > 0.0 ? powered : base) - mc_term;
  return cert;
}

bool ConditionReport::all_pass() const {
  for (const auto& item : items) {
    if (!item.pass) return false;
  }
  return true;
}

namespace {

// exp(-exp(a)) evaluated safely for very large/small a.
double exp_neg_exp(double a) {
  if (a > 7.0) return 0.0;  // exp(a) > 1096; exp(-1096) underflows anyway
  return std::exp(-std::exp(a));
}

}  // namespace

ConditionReport verify_achievability_conditions(double n, double log_m, double log_k,
                                                CovertMetric metric,
                                                const CovertChannelPair& channel,
                                                const PpmParams& params, double delta,
                                                double epsilon, double alpha, std::size_t cap) {
  ConditionReport report;
  const double log_n = std::log(n);
  const double zs = static_cast<double>(channel.willie().output_size());

  // (1) positive probability of drawing a good code.
  {
    const double log_l = log_m + log_k + std::log(zs) - 2.0 * std::log(channel.mu_z());
    const double t1 = exp_neg_exp(std::log(2.0) + log_m - 8.0 * log_n - 2.0 * std::log(log_l));
    const double t2 = exp_neg_exp(std::log(2.0) + log_m - 2.0 * log_n);
    const double lhs = 1.0 - t1 - t2 - 1.0 / n;
    report.items.push_back({"positive_prob", lhs > 0.0, lhs, "exact"});
  }

  // (2) reliability: F_XY(log(n^2 M)) + (1 + E[P_Y/Q_Y]) / n <= epsilon.
  {
    const double gamma1 = 2.0 * log_n + log_m;
    const TailWithBound f = f_xy_bound(channel.bob(), params.ell, gamma1, cap);
    const double f_val = f.exact ? *f.exact : f.bound;
    const double ratio = ppm_ratio_expectation(channel.bob(), params).exact;
    const double lhs = f_val + (1.0 + ratio) / n;
    report.items.push_back({"F_Y", lhs <= epsilon, epsilon - lhs, f.exact ? "exact" : "bound"});
  }

  // (3) resolvability tail: Fbar_XZ(log(MK/n^4)) <= 1/n^6.
  {
    const double gamma2 = log_m + log_k - 4.0 * log_n;
    const TailWithBound f = f_xz_exact_or_bound(channel.willie(), params, gamma2, cap);
    const double fbar = f.exact ? *f.exact : f.bound;
    const double target = std::pow(n, -6.0);
    report.items.push_back({"F_Z", fbar <= target, target - fbar,
                            f.exact ? std::string("exact") : std::string("bound")});
  }

  // (4) covertness of the PPM output law with the 1/sqrt(n) margin.
  {
    const double target = delta - 1.0 / std::sqrt(n);
    double value = 0.0;
    std::string mode;
    bool exact_ok = true;
    try {
      switch (metric) {
        case CovertMetric::KL:
          value = ppm_divergence_exact(channel.willie(), params, cap);
          break;
        case CovertMetric::TV:
          value = ppm_tv_exact(channel.willie(), params, cap);
          break;
        case CovertMetric::BETA:
          value = 1.0 - alpha - ppm_beta_exact(channel.willie(), params, alpha, cap).beta;
          break;
      }
      mode = "exact";
    } catch (const CombinatorialBlowup&) {
      exact_ok = false;
      value = 0.0;
    }
    if (!exact_ok) {
      switch (metric) {
        case CovertMetric::KL:
          value = ppm_divergence_bound(channel.willie(), params).value;
          break;
        case CovertMetric::TV:
          value = ppm_tv_bound(channel.willie(), params).value;
          break;
        case CovertMetric::BETA:
          value = 1.0 - alpha - ppm_beta_bound(channel.willie(), params, alpha).value;
          break;
      }
      mode = "bound";
    }
    report.items.push_back({"dist_P_Z", value <= target, target - value, mode});
  }
  return report;
}

DilutionResult dilute_codebook(const Codebook& code, double alpha_fraction) {
  if (!(alpha_fraction >= 0.0)) throw InvalidParams("alpha must be nonnegative");
  DilutionResult out;
  const std::int64_t added = static_cast<std::int64_t>(
      std::ceil(alpha_fraction * static_cast<double>(code.m_messages)));
  out.added_per_key = added;
  out.alpha_achieved = static_cast<double>(added) / static_cast<double>(code.m_messages);
  Codebook diluted;
  diluted.n = code.n;
  diluted.m_messages = code.m_messages + added;
  diluted.k_keys = code.k_keys;
  diluted.ell = code.ell;
  for (std::int64_t s = 0; s < code.k_keys; ++s) {
    for (std::int64_t w = 0; w < code.m_messages; ++w) {
      diluted.codewords.push_back(code.word(s, w));
    }
    for (std::int64_t a = 0; a < added; ++a) {
      diluted.codewords.emplace_back();  // all-zero codeword
    }
  }
  diluted.validate();
  out.codebook = std::move(diluted);
  return out;
}

double diluted_error_bound(double eps_prime, double alpha) {
  return (eps_prime + alpha) / (1.0 + alpha);
}

double diluted_kl_bound(double delta_prime, double alpha) { return delta_prime / (1.0 + alpha); }

WilsonInterval wilson_interval(double successes, double trials, double z) {
  const double p = successes / trials;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / trials;
  const double center = (p + z2 / (2.0 * trials)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

MonteCarloError simulate_error(const Codebook& code, const CovertChannelPair& channel,
                               double gamma, std::uint64_t trials_per_key, std::uint64_t seed) {
  MonteCarloError out;
  out.trials_per_key = trials_per_key;
  out.per_key.resize(static_cast<std::size_t>(code.k_keys), 0.0);
  const BinaryInputDmc& bob = channel.bob();
  std::vector<int> y(static_cast<std::size_t>(code.n));
  for (std::int64_t s = 0; s < code.k_keys; ++s) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(s)));
    std::uint64_t errors = 0;
    for (std::uint64_t t = 0; t < trials_per_key; ++t) {
      const std::int64_t w =
          static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(code.m_messages)));
      const auto& cw = code.word(s, w);
      std::size_t next_pulse = 0;
      for (std::size_t i = 0; i < y.size(); ++i) {
        const bool on =
            next_pulse < cw.size() && cw[next_pulse] == static_cast<std::int64_t>(i) + 1;
        if (on) ++next_pulse;
        const FiniteDistribution& row = on ? bob.on : bob.off;
        y[i] = static_cast<int>(sample_index(rng, row.probs()));
      }
      const auto decoded = threshold_decode(code, s, y, gamma, channel);
      if (!decoded || *decoded != w) ++errors;
    }
    out.per_key[static_cast<std::size_t>(s)] =
        static_cast<double>(errors) / static_cast<double>(trials_per_key);
  }
  out.p_err_max_keys = *std::max_element(out.per_key.begin(), out.per_key.end());
  double sum = 0.0;
  for (double v : out.per_key) sum += v;
  out.p_err_avg = sum / static_cast<double>(code.k_keys);
  const WilsonInterval wi =
      wilson_interval(out.p_err_max_keys * static_cast<double>(trials_per_key),
                      static_cast<double>(trials_per_key));
  out.wilson_low = wi.low;
  out.wilson_high = wi.high;
  return out;
}

}  // namespace covert
