#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "covert/asymptotics.hpp"
#include "covert/coding.hpp"

namespace covert {

// Flat key=value experiment description. Channels are either BSC crossover
// probabilities (p_m, p_w) or explicit rows (p0, p1, q0, q1).
struct ExperimentConfig {
  std::optional<double> p_m, p_w;
  std::optional<std::vector<double>> p0, p1, q0, q1;
  std::string metric = "kl";  // kl | tv | beta
  double epsilon = 1e-3;
  double delta = 1e-2;
  double alpha = 0.2;
  double rho = 0.1;
  std::vector<double> n_grid;  // strictly increasing; empty = verb default
  std::uint64_t seed = 1;
  std::string out;
  std::string unit = "nats";  // nats | bits
  std::uint64_t trials = 100000;
  std::optional<std::int64_t> n, ell, m_messages, k_keys;
  std::optional<double> gamma;
};

ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig load_config_file(const std::string& path);

CovertChannelPair config_channel(const ExperimentConfig& cfg);
CovertMetric config_metric(const ExperimentConfig& cfg);

// CSV emitters; all deterministic for a fixed config, 12 significant digits,
// LF line endings. Values in the configured unit.
std::string figure2_csv(const ExperimentConfig& cfg);
std::string montecarlo_csv(const ExperimentConfig& cfg);
std::string plan_csv(const ExperimentConfig& cfg);
std::string constants_text(const ExperimentConfig& cfg);

std::string format_sig12(double v);

}  // namespace covert
