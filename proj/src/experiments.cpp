#include "covert/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <fstream>
#include <sstream>

#include "covert/adversary.hpp"
#include "covert/gaussian.hpp"
#include "covert/verification.hpp"

namespace covert {

namespace {

std::vector<double> parse_double_list(const std::string& value, const std::string& key) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    std::size_t next = value.find(',', pos);
    if (next == std::string::npos) next = value.size();
    const std::string tok = value.substr(pos, next - pos);
    if (tok.empty()) throw ConfigError("empty element in list for " + key);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw ConfigError("bad number in " + key + ": " + tok);
    } catch (const std::exception&) {
      throw ConfigError("bad number in " + key + ": " + tok);
    }
    pos = next + 1;
    if (next == value.size()) break;
  }
  return out;
}

double parse_double(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw ConfigError("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad number for " + key + ": " + value);
  }
}

std::int64_t parse_int(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const std::int64_t v = std::stoll(value, &used);
    if (used != value.size()) throw ConfigError("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad integer for " + key + ": " + value);
  }
}

}  // namespace

ExperimentConfig parse_config_text(std::string_view text) {
  ExperimentConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value: " + line);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw ConfigError("empty value for " + key);

    if (key == "p_m") cfg.p_m = parse_double(value, key);
    else if (key == "p_w") cfg.p_w = parse_double(value, key);
    else if (key == "p0") cfg.p0 = parse_double_list(value, key);
    else if (key == "p1") cfg.p1 = parse_double_list(value, key);
    else if (key == "q0") cfg.q0 = parse_double_list(value, key);
    else if (key == "q1") cfg.q1 = parse_double_list(value, key);
    else if (key == "metric") cfg.metric = value;
    else if (key == "epsilon") cfg.epsilon = parse_double(value, key);
    else if (key == "delta") cfg.delta = parse_double(value, key);
    else if (key == "alpha") cfg.alpha = parse_double(value, key);
    else if (key == "rho") cfg.rho = parse_double(value, key);
    else if (key == "n_grid") cfg.n_grid = parse_double_list(value, key);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(value, key));
    else if (key == "out") cfg.out = value;
    else if (key == "unit") cfg.unit = value;
    else if (key == "trials") cfg.trials = static_cast<std::uint64_t>(parse_int(value, key));
    else if (key == "n") cfg.n = parse_int(value, key);
    else if (key == "ell") cfg.ell = parse_int(value, key);
    else if (key == "M") cfg.m_messages = parse_int(value, key);
    else if (key == "K") cfg.k_keys = parse_int(value, key);
    else if (key == "gamma") cfg.gamma = parse_double(value, key);
    else throw ConfigError("unknown config key: " + key);
  }
  for (std::size_t i = 1; i < cfg.n_grid.size(); ++i) {
    if (!(cfg.n_grid[i] > cfg.n_grid[i - 1])) throw ConfigError("n_grid must be strictly increasing");
  }
  if (cfg.unit != "nats" && cfg.unit != "bits") throw ConfigError("unit must be nats or bits");
  if (cfg.metric != "kl" && cfg.metric != "tv" && cfg.metric != "beta") {
    throw ConfigError("metric must be kl, tv or beta");
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

CovertChannelPair config_channel(const ExperimentConfig& cfg) {
  const bool explicit_rows = cfg.p0 || cfg.p1 || cfg.q0 || cfg.q1;
  if (explicit_rows) {
    if (!(cfg.p0 && cfg.p1 && cfg.q0 && cfg.q1)) {
      throw ConfigError("explicit channels need all of p0, p1, q0, q1");
    }
    return CovertChannelPair(BinaryInputDmc(FiniteDistribution::from_probs(*cfg.p0),
                                            FiniteDistribution::from_probs(*cfg.p1)),
                             BinaryInputDmc(FiniteDistribution::from_probs(*cfg.q0),
                                            FiniteDistribution::from_probs(*cfg.q1)));
  }
  const double pm = cfg.p_m.value_or(0.11);
  const double pw = cfg.p_w.value_or(0.45);
  return CovertChannelPair::from_bsc(pm, pw);
}

CovertMetric config_metric(const ExperimentConfig& cfg) {
  if (cfg.metric == "kl") return CovertMetric::KL;
  if (cfg.metric == "tv") return CovertMetric::TV;
  return CovertMetric::BETA;
}

std::string format_sig12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

double unit_scale(const ExperimentConfig& cfg) {
  return cfg.unit == "bits" ? 1.0 / std::log(2.0) : 1.0;
}

std::vector<double> default_figure2_grid() {
  // Log-spaced 10^2 .. 10^8, four points per decade.
  std::vector<double> grid;
  const double mantissas[] = {1.0, 1.778279410038923, 3.162277660168379, 5.623413251903491};
  for (int decade = 2; decade <= 8; ++decade) {
    for (double m : mantissas) {
      const double n = std::round(m * std::pow(10.0, decade));
      if (n <= 1e8) grid.push_back(n);
    }
  }
  grid.push_back(1e8);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace

std::string figure2_csv(const ExperimentConfig& cfg) {
  const CovertChannelPair channel = config_channel(cfg);
  const ChannelConstants cc = channel_constants(channel);
  const double scale = unit_scale(cfg);
  std::vector<double> grid = cfg.n_grid.empty() ? default_figure2_grid() : cfg.n_grid;

  const double asym_d = first_order_slope_D(cfg.delta, cc);
  const double asym_v = first_order_slope_V(cfg.delta, cc);
  const double asym_b = first_order_slope_beta(cfg.delta, cfg.alpha, cc);

  std::ostringstream out;
  out << "n,mode,unit"
      << ",d_plan,d_upper,d_lower,d_asymptote"
      << ",v_plan,v_upper,v_lower,v_asymptote"
      << ",b_plan,b_upper,b_lower,b_asymptote\n";
  for (double n : grid) {
    const double rn = std::sqrt(n);
    const CodePlan pd = plan_D(n, cfg.epsilon, cfg.delta, cfg.rho, cc);
    const CodePlan pv = plan_V(n, cfg.epsilon, cfg.delta, cfg.rho, cc);
    const CodePlan pb = plan_beta(n, cfg.epsilon, cfg.delta, cfg.alpha, cfg.rho, cc);
    out << format_sig12(n) << ",formula," << cfg.unit;
    for (const CodePlan* p : {&pd, &pv, &pb}) {
      out << ',' << format_sig12(scale * p->log_m / rn) << ','
          << format_sig12(scale * p->envelope_upper / rn) << ','
          << format_sig12(scale * p->envelope_lower / rn);
      if (p->metric == CovertMetric::KL) out << ',' << format_sig12(scale * asym_d);
      if (p->metric == CovertMetric::TV) out << ',' << format_sig12(scale * asym_v);
      if (p->metric == CovertMetric::BETA) out << ',' << format_sig12(scale * asym_b);
    }
    out << '\n';
  }
  return out.str();
}

std::string plan_csv(const ExperimentConfig& cfg) {
  const CovertChannelPair channel = config_channel(cfg);
  const ChannelConstants cc = channel_constants(channel);
  const CovertMetric metric = config_metric(cfg);
  const double scale = unit_scale(cfg);
  std::vector<double> grid = cfg.n_grid;
  if (grid.empty() && cfg.n) grid.push_back(static_cast<double>(*cfg.n));
  if (grid.empty()) grid = default_figure2_grid();

  std::ostringstream out;
  out << "n,metric,unit,ell,log_M,log_K,first_order_slope,envelope_upper,envelope_lower,"
         "second_order_regime,dropped_terms\n";
  for (double n : grid) {
    CodePlan p;
    switch (metric) {
      case CovertMetric::KL: p = plan_D(n, cfg.epsilon, cfg.delta, cfg.rho, cc); break;
      case CovertMetric::TV: p = plan_V(n, cfg.epsilon, cfg.delta, cfg.rho, cc); break;
      case CovertMetric::BETA:
        p = plan_beta(n, cfg.epsilon, cfg.delta, cfg.alpha, cfg.rho, cc);
        break;
    }
    std::string dropped;
    for (std::size_t i = 0; i < p.dropped_terms.size(); ++i) {
      if (i > 0) dropped += "; ";
      dropped += p.dropped_terms[i];
    }
    out << format_sig12(n) << ',' << cfg.metric << ',' << cfg.unit << ','
        << format_sig12(p.ell) << ',' << format_sig12(scale * p.log_m) << ','
        << format_sig12(scale * p.log_k) << ',' << format_sig12(scale * p.first_order_slope)
        << ',' << format_sig12(scale * p.envelope_upper) << ','
        << format_sig12(scale * p.envelope_lower) << ','
        << (p.second_order_regime ? "yes" : "no") << ",\"" << dropped << "\"\n";
  }
  return out.str();
}

std::string montecarlo_csv(const ExperimentConfig& cfg) {
  const CovertChannelPair channel = config_channel(cfg);
  const ChannelConstants cc = channel_constants(channel);
  const CovertMetric metric = config_metric(cfg);
  if (!cfg.n) throw ConfigError("montecarlo needs n");
  const std::int64_t n = *cfg.n;
  if (static_cast<double>(n) * static_cast<double>(cfg.trials) > 5e10) {
    throw ConfigError("n * trials budget too large");
  }

  CodePlan plan;
  switch (metric) {
    case CovertMetric::KL:
      plan = plan_D(static_cast<double>(n), cfg.epsilon, cfg.delta, cfg.rho, cc);
      break;
    case CovertMetric::TV:
      plan = plan_V(static_cast<double>(n), cfg.epsilon, cfg.delta, cfg.rho, cc);
      break;
    case CovertMetric::BETA:
      plan = plan_beta(static_cast<double>(n), cfg.epsilon, cfg.delta, cfg.alpha, cfg.rho, cc);
      break;
  }
  const std::int64_t ell = cfg.ell.value_or(static_cast<std::int64_t>(plan.ell));
  const PpmParams params = make_ppm(n, ell);
  if (!cfg.m_messages && plan.log_m > 30.0) {
    throw ConfigError("planned message count too large to instantiate; pass M explicitly");
  }
  const std::int64_t m_messages =
      cfg.m_messages.value_or(std::max<std::int64_t>(1, static_cast<std::int64_t>(
                                                            std::llround(std::exp(plan.log_m)))));
  const std::int64_t k_keys = cfg.k_keys.value_or(1);
  const double gamma = cfg.gamma.value_or(2.0 * std::log(static_cast<double>(n)) +
                                          std::log(static_cast<double>(m_messages)));

  const Codebook code = generate_codebook(params, m_messages, k_keys, cfg.seed);
  const MonteCarloError err = simulate_error(code, channel, gamma, cfg.trials, cfg.seed);

  double covert_value = 0.0;
  std::string covert_mode = "exact";
  try {
    switch (metric) {
      case CovertMetric::KL: covert_value = ppm_divergence_exact(channel.willie(), params); break;
      case CovertMetric::TV: covert_value = ppm_tv_exact(channel.willie(), params); break;
      case CovertMetric::BETA:
        covert_value = 1.0 - cfg.alpha - ppm_beta_exact(channel.willie(), params, cfg.alpha).beta;
        break;
    }
  } catch (const CombinatorialBlowup&) {
    covert_mode = "bound";
    try {
      switch (metric) {
        case CovertMetric::KL:
          covert_value = ppm_divergence_bound(channel.willie(), params).value;
          break;
        case CovertMetric::TV:
          covert_value = ppm_tv_bound(channel.willie(), params).value;
          break;
        case CovertMetric::BETA:
          covert_value =
              1.0 - cfg.alpha - ppm_beta_bound(channel.willie(), params, cfg.alpha).value;
          break;
      }
    } catch (const DomainError&) {
      // beta bound needs alpha + 1/sqrt(ell) < 1; out of domain at tiny ell
      covert_value = std::numeric_limits<double>::quiet_NaN();
      covert_mode = "unavailable";
    }
  }

  const double dn = static_cast<double>(n);
  OneShotLambdas lambdas{1.0 / dn, dn, 1.0 / (dn * dn * dn * dn)};
  const double gamma2 =
      std::log(static_cast<double>(m_messages) * static_cast<double>(k_keys)) - 4.0 * std::log(dn);
  const OneShotCertificate cert = existence_certificate(
      static_cast<double>(m_messages), static_cast<double>(k_keys), lambdas, gamma, gamma2,
      channel, params);

  std::ostringstream out;
  out << "n,ell,M,K,gamma,trials,seed,"
         "p_err_max_keys,p_err_wilson_low,p_err_wilson_high,p_err_mode,"
         "covertness_metric,covertness_value,covertness_mode,"
         "certificate_margin,certificate_reliability_bound,certificate_resolvability_bound,"
         "certificate_mode\n";
  out << n << ',' << ell << ',' << m_messages << ',' << k_keys << ',' << format_sig12(gamma)
      << ',' << cfg.trials << ',' << cfg.seed << ',' << format_sig12(err.p_err_max_keys) << ','
      << format_sig12(err.wilson_low) << ',' << format_sig12(err.wilson_high) << ",monte-carlo,"
      << cfg.metric << ',' << format_sig12(covert_value) << ',' << covert_mode << ','
      << format_sig12(cert.existence_margin) << ',' << format_sig12(cert.reliability_bound)
      << ',' << format_sig12(cert.resolvability_bound) << ",bound\n";
  return out.str();
}

std::string constants_text(const ExperimentConfig& cfg) {
  const CovertChannelPair channel = config_channel(cfg);
  const ChannelConstants cc = channel_constants(channel);
  const DetectorConstants dc = detector_constants(channel.willie());
  const double scale = unit_scale(cfg);
  std::ostringstream out;
  out << "unit," << cfg.unit << "\n";
  out << "D_P," << format_sig12(scale * cc.d_p) << "\n";
  out << "V_P," << format_sig12(cc.v_p) << "\n";
  out << "T_P," << format_sig12(cc.t_p) << "\n";
  out << "D_Q," << format_sig12(scale * cc.d_q) << "\n";
  out << "chi2_Q," << format_sig12(cc.chi2_q) << "\n";
  out << "chi2_P," << format_sig12(cc.chi2_p) << "\n";
  out << "mu_Z," << format_sig12(cc.mu_z) << "\n";
  for (const auto& [formula, value] : dc.formulas) {
    out << "\"" << formula << "\"," << format_sig12(value) << "\n";
  }
  return out.str();
}

}  // namespace covert
