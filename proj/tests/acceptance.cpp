// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "covert/adversary.hpp"
#include "covert/asymptotics.hpp"
#include "covert/coding.hpp"
#include "covert/experiments.hpp"
#include "covert/gaussian.hpp"
#include "covert/rng.hpp"
#include "covert/verification.hpp"

using namespace covert;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail, double seconds, double budget) {
  const bool in_time = seconds <= budget;
  if (!pass || !in_time) ++failures;
  std::printf("[%s] criterion %d: %s (%.2fs, budget %.0fs)\n",
              pass && in_time ? "PASS" : "FAIL", criterion, detail.c_str(), seconds, budget);
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// ---- independent plug-in oracle ------------------------------------------

double oracle_q(double x) { return 0.5 * std::erfc(x * 0.7071067811865476); }

// bisection, independent of the library's Newton inversion
double oracle_q_inv(double p) {
  double lo = -12.0, hi = 12.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (oracle_q(mid) > p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct OracleConstants {
  double d_p, v_p, chi2, gamma, lambda, upsilon;
};

OracleConstants oracle_constants() {
  OracleConstants o{};
  const double llr = std::log(0.89 / 0.11);
  o.d_p = 0.78 * llr;                         // (0.89 - 0.11) ln(0.89/0.11)
  o.v_p = llr * llr - o.d_p * o.d_p;          // E X^2 - (E X)^2 with X = +-llr
  o.chi2 = 0.01 / 0.55 + 0.01 / 0.45;         // two-term hand sum at p_w = 0.45
  o.gamma = oracle_q_inv(0.5 * (1.0 - 0.01));
  o.lambda = oracle_q_inv(1.0 - 0.2 - 0.01);
  o.upsilon = oracle_q_inv(0.2);
  return o;
}

FiniteDistribution random_distribution(std::mt19937_64& rng, std::size_t size) {
  std::vector<double> probs(size);
  double sum = 0.0;
  for (auto& p : probs) {
    p = 0.02 + unit_double(rng);
    sum += p;
  }
  for (auto& p : probs) p /= sum;
  return FiniteDistribution::from_probs(std::move(probs));
}

// ---- criteria -------------------------------------------------------------

void criterion_1_asymptotes() {
  Timer timer;
  const OracleConstants o = oracle_constants();
  bool ok = std::abs(o.d_p - 1.6308) < 2e-4 && std::abs(o.chi2 - 0.040404) < 1e-6 &&
            std::abs(o.gamma - 0.012533) < 1e-5 && std::abs(o.lambda + 0.8064) < 1e-4 &&
            std::abs(o.upsilon - 0.8416) < 1e-4;

  const double slope_d = std::sqrt(2.0 * 0.01 / o.chi2) * o.d_p;
  const double slope_v = 2.0 * o.gamma * o.d_p / std::sqrt(o.chi2);
  const double slope_b = (o.lambda + o.upsilon) * o.d_p / std::sqrt(o.chi2);

  const ChannelConstants cc = channel_constants(CovertChannelPair::from_bsc(0.11, 0.45));
  const double n = 1e8;
  // The planners' first-order reconstruction ell_n D_P / sqrt(n); the
  // explicit n^{1/4} dispersion penalty is reported separately and still
  // sits visibly below the dotted lines at n = 1e8.
  const double got_d = plan_D(n, 1e-3, 0.01, 0.1, cc).first_order_slope;
  const double got_v = plan_V(n, 1e-3, 0.01, 0.1, cc).first_order_slope;
  const double got_b = plan_beta(n, 1e-3, 0.01, 0.2, 0.1, cc).first_order_slope;

  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "first-order asymptotes at n=1e8: D %.6f vs %.6f, V %.6f vs %.6f, "
                "beta %.6f vs %.6f",
                got_d, slope_d, got_v, slope_v, got_b, slope_b);
  ok = ok && std::abs(got_d / slope_d - 1.0) <= 0.02 &&
       std::abs(got_v / slope_v - 1.0) <= 0.02 && std::abs(got_b / slope_b - 1.0) <= 0.02;
  report(1, ok, buf, timer.seconds(), 1.0);
}

void criterion_2_exact_oracles() {
  Timer timer;
  const auto rep = verification::run_suite("exact-oracles", 2024);
  int checks = 0;
  for (const auto& c : rep.checks) checks += c.pass ? 1 : 0;
  report(2, rep.all_pass(),
         "PPM block structure vs full enumeration, " + std::to_string(checks) + "/" +
             std::to_string(rep.checks.size()) + " checks at 1e-10",
         timer.seconds(), 60.0);
}

void criterion_3_moments() {
  Timer timer;
  const auto rep = verification::run_suite("moments", 99);
  int checks = 0;
  for (const auto& c : rep.checks) checks += c.pass ? 1 : 0;
  report(3, rep.all_pass(),
         "moment identities exact to 1e-12 (m=2..12) and fitted O-constants stable, " +
             std::to_string(checks) + "/" + std::to_string(rep.checks.size()),
         timer.seconds(), 30.0);
}

void criterion_4_one_shot() {
  Timer timer;
  const auto rep = verification::run_suite("concentration", 4242);
  int checks = 0;
  for (const auto& c : rep.checks) checks += c.pass ? 1 : 0;
  report(4, rep.all_pass(),
         "2000 random (n=4, M=8, K=2) codebooks: mean KL within the resolvability bound, "
         "McDiarmid exceedance within the tail on a 10-point grid, " +
             std::to_string(checks) + "/" + std::to_string(rep.checks.size()),
         timer.seconds(), 300.0);
}

void criterion_5_decoder() {
  Timer timer;
  const CovertChannelPair channel = CovertChannelPair::from_bsc(0.11, 0.45);
  const PpmParams params = make_ppm(64, 4);
  const std::int64_t m_messages = 4;
  const std::uint64_t trials = 100000;
  bool ok = true;
  std::string detail = "max-over-keys error vs one-shot ceiling at gamma in {3, 4}:";
  for (double gamma : {3.0, 4.0}) {
    const Codebook code = generate_codebook(params, m_messages, 2, 777);
    const MonteCarloError err = simulate_error(code, channel, gamma, trials, 999);
    const ErrorBounds eb = error_expectation_bounds(channel, params, m_messages, gamma);
    const double sigma = std::sqrt(err.p_err_max_keys * (1.0 - err.p_err_max_keys) /
                                   static_cast<double>(trials)) +
                         1e-4;
    const double ceiling = eb.eps1_expectation + eb.eps2_bound + 3.0 * sigma;
    char buf[96];
    std::snprintf(buf, sizeof(buf), " [g=%.0f: %.4f <= %.4f]", gamma, err.p_err_max_keys,
                  ceiling);
    detail += buf;
    ok = ok && err.p_err_max_keys <= ceiling;
  }
  report(5, ok, detail, timer.seconds(), 120.0);
}

void criterion_6_sandwich() {
  Timer timer;
  const auto rep = verification::run_suite("sandwich", 606);
  int checks = 0;
  for (const auto& c : rep.checks) checks += c.pass ? 1 : 0;
  report(6, rep.all_pass(),
         "exact detector 1-a-b below exact TV; planner log M below the second-order converse "
         "at n=1e3..1e6, " +
             std::to_string(checks) + "/" + std::to_string(rep.checks.size()),
         timer.seconds(), 60.0);
}

void criterion_7_properties() {
  Timer timer;
  bool ok = true;
  std::mt19937_64 rng(7777);

  // Pinsker and alpha + beta >= 1 - V on random pairs.
  for (int trial = 0; trial < 120 && ok; ++trial) {
    const std::size_t size = 2 + uniform_below(rng, 7);
    const auto p = random_distribution(rng, size);
    const auto q = random_distribution(rng, size);
    const double v = total_variation(p, q);
    ok = ok && v * v <= 0.5 * kl_divergence(p, q) + 1e-12;
    for (double alpha : {0.1, 0.3, 0.6}) {
      const auto r = beta_alpha_report(p, q, alpha);
      ok = ok && r.achieved_alpha + r.beta >= 1.0 - v - 1e-12;
    }
  }

  // Likelihood-ratio path equals the exhaustive subset oracle at achievable
  // false-alarm levels (Neyman-Pearson points).
  for (int trial = 0; trial < 30 && ok; ++trial) {
    const std::size_t size = 2 + uniform_below(rng, 11);
    const auto p = random_distribution(rng, size);
    const auto q = random_distribution(rng, size);
    std::vector<std::size_t> order(size);
    for (std::size_t i = 0; i < size; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return q.prob(a) * p.prob(b) > q.prob(b) * p.prob(a);
    });
    double prefix = 0.0;
    for (std::size_t i = 0; i + 1 < size && ok; ++i) {
      prefix += p.prob(order[i]);
      std::vector<RatioClass> classes;
      for (std::size_t j = 0; j < size; ++j) classes.push_back({p.prob(j), q.prob(j)});
      const auto greedy = beta_alpha_classes(std::move(classes), prefix);
      const auto subsets = beta_alpha_report(p, q, prefix);
      ok = ok && std::abs(greedy.beta - subsets.beta) <= 1e-12;
    }
  }

  // Berry-Esseen envelope vs exact i.i.d.-sum CDFs, n <= 12.
  for (int trial = 0; trial < 25 && ok; ++trial) {
    const std::size_t size = 2 + uniform_below(rng, 3);
    const auto base = random_distribution(rng, size);
    std::vector<double> score(size);
    for (auto& s : score) s = -1.0 + 2.0 * unit_double(rng);
    const std::uint64_t count = 2 + uniform_below(rng, 11);
    double mu = 0.0, var = 0.0, t_abs = 0.0;
    for (std::size_t i = 0; i < size; ++i) mu += base.prob(i) * score[i];
    for (std::size_t i = 0; i < size; ++i) {
      var += base.prob(i) * (score[i] - mu) * (score[i] - mu);
      t_abs += base.prob(i) * std::pow(std::abs(score[i] - mu), 3);
    }
    if (var < 1e-6) continue;
    const auto m = GaussianMoments::iid(mu, var, t_abs, count);
    const double bound = berry_esseen_bound(m);
    const auto law = iid_sum_distribution(score, base, count);
    for (const auto& atom : law.atoms()) {
      const double lambda = (atom.value - m.mean) / std::sqrt(m.variance);
      ok = ok && std::abs(law.tail_geq(atom.value) - q_function(lambda)) <= bound + 1e-12;
    }
  }

  // Cubic residual below 1e-9 across the three-real-roots regime.
  for (double p : {1.0, 50.0, 1e4, 1e7}) {
    const double q_max = std::sqrt(4.0 * p * p * p / 27.0);
    for (double frac : {0.0, 0.25, 0.8, 0.99}) {
      const double x = cubic_root_trig(p, frac * q_max);
      ok = ok &&
           std::abs(x * x * x - p * x + frac * q_max) <= 1e-9 * std::max(1.0, std::pow(p, 1.5));
    }
  }

  report(7, ok,
         "Pinsker, alpha+beta >= 1-V, LR-vs-subset equality, Berry-Esseen envelopes, "
         "cubic residual <= 1e-9",
         timer.seconds(), 120.0);
}

}  // namespace

int main() {
  criterion_1_asymptotes();
  criterion_2_exact_oracles();
  criterion_3_moments();
  criterion_4_one_shot();
  criterion_5_decoder();
  criterion_6_sandwich();
  criterion_7_properties();
  std::printf("acceptance: %s\n", failures == 0 ? "all criteria passed" : "FAILURES");
  return failures == 0 ? 0 : 1;
}
