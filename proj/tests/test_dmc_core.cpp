#include <cmath>
#include <random>
#include <vector>

#include "covert/distribution.hpp"
#include "covert/gaussian.hpp"
#include "covert/rng.hpp"
#include "covert/sum_distribution.hpp"
#include "doctest.h"

using namespace covert;

namespace {

// Test-local oracle: brute-force enumeration of all |alphabet|^count outcomes.
SumDistribution brute_force_sum(const std::vector<double>& score, const FiniteDistribution& base,
                                int count) {
  std::vector<SumDistribution::Atom> atoms;
  const std::size_t k = base.size();
  std::size_t total = 1;
  for (int i = 0; i < count; ++i) total *= k;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    double value = 0.0;
    double prob = 1.0;
    for (int i = 0; i < count; ++i) {
      value += score[c % k];
      prob *= base.prob(c % k);
      c /= k;
    }
    atoms.push_back({value, prob});
  }
  return SumDistribution::from_atoms(std::move(atoms), static_cast<std::uint64_t>(count));
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

}  // namespace

TEST_CASE("kl divergence examples") {
  const auto half = FiniteDistribution::from_probs({0.5, 0.5});
  CHECK(kl_divergence(half, half) == doctest::Approx(0.0));

  const auto p = FiniteDistribution::from_probs({0.89, 0.11});
  const auto q = FiniteDistribution::from_probs({0.11, 0.89});
  // 0.78 * ln(0.89/0.11), expanded by hand
  CHECK(kl_divergence(p, q) == doctest::Approx(0.78 * std::log(0.89 / 0.11)).epsilon(1e-12));
  CHECK(kl_divergence(p, q) == doctest::Approx(1.6308).epsilon(1e-4));

  const auto point = FiniteDistribution::from_probs({1.0, 0.0});
  CHECK(kl_divergence(point, half) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(kl_divergence(half, point), AbsoluteContinuityViolation);
}

TEST_CASE("total variation examples") {
  const auto p = FiniteDistribution::from_probs({0.55, 0.45});
  const auto q = FiniteDistribution::from_probs({0.45, 0.55});
  CHECK(total_variation(p, p) == doctest::Approx(0.0));
  CHECK(total_variation(p, q) == doctest::Approx(0.10).epsilon(1e-12));
  const auto a = FiniteDistribution::from_probs({1.0, 0.0});
  const auto b = FiniteDistribution::from_probs({0.0, 1.0});
  CHECK(total_variation(a, b) == doctest::Approx(1.0));
  CHECK_THROWS_AS(total_variation(a, FiniteDistribution::from_probs({0.5, 0.25, 0.25})),
                  AlphabetMismatch);
}

TEST_CASE("chi squared examples") {
  const auto q0 = FiniteDistribution::from_probs({0.55, 0.45});
  const auto q1 = FiniteDistribution::from_probs({0.45, 0.55});
  CHECK(chi_squared(q0, q0) == doctest::Approx(0.0));
  CHECK(chi_squared(q1, q0) == doctest::Approx(0.01 / 0.55 + 0.01 / 0.45).epsilon(1e-12));
  const auto u = FiniteDistribution::from_probs({0.5, 0.5});
  const auto v = FiniteDistribution::from_probs({0.75, 0.25});
  CHECK(chi_squared(v, u) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("beta_alpha examples and reporting") {
  // alpha = 0.25: the only feasible exclusions are {} or one atom of P-mass 0.25.
  const auto p = FiniteDistribution::from_probs({0.5, 0.25, 0.25});
  const auto q = FiniteDistribution::from_probs({0.1, 0.45, 0.45});
  const auto r = beta_alpha_report(p, q, 0.25);
  CHECK(r.exhaustive);
  CHECK(r.beta == doctest::Approx(0.55).epsilon(1e-12));
  CHECK(r.achieved_alpha == doctest::Approx(0.25).epsilon(1e-12));

  // Disjoint supports: perfect test even at alpha = 0.
  const auto a = FiniteDistribution::from_probs({1.0, 0.0});
  const auto b = FiniteDistribution::from_probs({0.0, 1.0});
  CHECK(beta_alpha(a, b, 0.0) == doctest::Approx(0.0));

  // P = Q: the test is blind; beta = 1 - (largest achievable alpha' <= alpha).
  const auto u = FiniteDistribution::from_probs({0.3, 0.3, 0.2, 0.2});
  for (double alpha : {0.0, 0.15, 0.25, 0.5, 0.77}) {
    const auto res = beta_alpha_report(u, u, alpha);
    CHECK(res.beta == doctest::Approx(1.0 - res.achieved_alpha).epsilon(1e-12));
    CHECK(res.achieved_alpha <= alpha + 1e-15);
  }
}

TEST_CASE("beta_alpha likelihood-ratio path equals exhaustive oracle at achievable levels") {
  // At alpha equal to a prefix mass of the likelihood-ratio ordering the
  // greedy class path is Neyman-Pearson optimal, hence equal to the subset
  // oracle.
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t size = 2 + uniform_below(rng, 11);  // up to 12 atoms
    const auto p = random_distribution(rng, size);
    const auto q = random_distribution(rng, size);

    std::vector<std::size_t> order(size);
    for (std::size_t i = 0; i < size; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return q.prob(a) * p.prob(b) > q.prob(b) * p.prob(a);
    });
    double prefix = 0.0;
    for (std::size_t i = 0; i + 1 < size; ++i) {
      prefix += p.prob(order[i]);
      std::vector<RatioClass> classes;
      for (std::size_t j = 0; j < size; ++j) classes.push_back({p.prob(j), q.prob(j)});
      const auto greedy = beta_alpha_classes(std::move(classes), prefix);
      const auto exhaustive = beta_alpha_report(p, q, prefix);
      REQUIRE(exhaustive.exhaustive);
      CHECK(greedy.beta == doctest::Approx(exhaustive.beta).epsilon(1e-12));
    }
  }
}

TEST_CASE("hypothesis testing properties: Pinsker and alpha + beta >= 1 - V") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t size = 2 + uniform_below(rng, 7);  // up to 8 atoms
    const auto p = random_distribution(rng, size);
    const auto q = random_distribution(rng, size);
    const double v = total_variation(p, q);
    CHECK(v * v <= 0.5 * kl_divergence(p, q) + 1e-12);
    for (double alpha : {0.05, 0.2, 0.5, 0.8}) {
      const auto r = beta_alpha_report(p, q, alpha);
      CHECK(r.achieved_alpha + r.beta >= 1.0 - v - 1e-12);
    }
  }
}

TEST_CASE("q function and inverse") {
  CHECK(q_function(0.0) == doctest::Approx(0.5));
  CHECK(q_inverse(0.5) == doctest::Approx(0.0));
  CHECK(q_inverse(0.2) == doctest::Approx(0.8416).epsilon(1e-4));
  CHECK_THROWS_AS(q_inverse(0.0), DomainError);
  CHECK_THROWS_AS(q_inverse(1.0), DomainError);
  for (double x = -5.0; x <= 6.0; x += 0.25) {
    CHECK(std::abs(q_inverse(q_function(x)) - x) <= 1e-9 * std::max(1.0, std::abs(x)));
  }
  // Below about -5.5 the round trip is limited by rounding of Q(x) near 1:
  // ulp(1)/pdf(6) is about 3.6e-8, so 1e-9 is not representable there.
  for (double x = -6.0; x < -5.0; x += 0.25) {
    CHECK(std::abs(q_inverse(q_function(x)) - x) <= 1e-7);
  }
}

TEST_CASE("iid_sum_distribution basics") {
  const auto base = FiniteDistribution::from_probs({0.5, 0.5});
  const std::vector<double> identity = {0.0, 1.0};

  const auto zero = iid_sum_distribution(identity, base, 0);
  REQUIRE(zero.atoms().size() == 1);
  CHECK(zero.atoms()[0].value == doctest::Approx(0.0));
  CHECK(zero.atoms()[0].prob == doctest::Approx(1.0));

  const auto two = iid_sum_distribution(identity, base, 2);
  REQUIRE(two.atoms().size() == 3);
  CHECK(two.atoms()[0].prob == doctest::Approx(0.25));
  CHECK(two.atoms()[1].prob == doctest::Approx(0.5));
  CHECK(two.atoms()[2].prob == doctest::Approx(0.25));

  // LLR score on BSC(0.11) under P1, count 3: binomial(3, 0.89) weights.
  const auto p1 = FiniteDistribution::from_probs({0.11, 0.89});
  const double llr = std::log(0.89 / 0.11);
  const std::vector<double> llr_score = {-llr, llr};
  const auto law = iid_sum_distribution(llr_score, p1, 3);
  REQUIRE(law.atoms().size() == 4);
  CHECK(law.atoms()[3].prob == doctest::Approx(std::pow(0.89, 3)).epsilon(1e-12));
  CHECK(law.atoms()[0].prob == doctest::Approx(std::pow(0.11, 3)).epsilon(1e-12));
  CHECK(law.atoms()[2].prob == doctest::Approx(3 * 0.89 * 0.89 * 0.11).epsilon(1e-12));
}

TEST_CASE("iid_sum_distribution equals brute-force enumeration") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t size = 2 + uniform_below(rng, 3);
    const auto base = random_distribution(rng, size);
    std::vector<double> score(size);
    for (auto& s : score) s = -2.0 + 4.0 * unit_double(rng);
    const int count = 1 + static_cast<int>(uniform_below(rng, 8));

    const auto fast = iid_sum_distribution(score, base, count);
    const auto slow = brute_force_sum(score, base, count);
    REQUIRE(fast.atoms().size() == slow.atoms().size());
    for (std::size_t i = 0; i < fast.atoms().size(); ++i) {
      CHECK(fast.atoms()[i].value ==
            doctest::Approx(slow.atoms()[i].value).epsilon(1e-12).scale(1.0));
      CHECK(fast.atoms()[i].prob ==
            doctest::Approx(slow.atoms()[i].prob).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("combinatorial blowup cap") {
  const auto base = FiniteDistribution::uniform(6);
  const std::vector<double> score = {0, 1, 2, 3, 4, 5};
  CHECK_THROWS_AS(iid_sum_distribution(score, base, 1000, 100), CombinatorialBlowup);
}

TEST_CASE("berry-esseen bound") {
  CHECK(berry_esseen_bound(GaussianMoments::iid(0.0, 1.0, 1.0, 1)) == doctest::Approx(6.0));
  CHECK_THROWS_AS(berry_esseen_bound(GaussianMoments{0.0, 0.0, 1.0}), DegenerateVariance);

  // BSC(0.11) LLR under P1, n = 100.
  const double llr = std::log(0.89 / 0.11);
  const double d_p = 0.78 * llr;
  const double v_p = llr * llr - d_p * d_p;
  const double t_p =
      0.89 * std::pow(std::abs(llr - d_p), 3) + 0.11 * std::pow(std::abs(-llr - d_p), 3);
  const auto m = GaussianMoments::iid(d_p, v_p, t_p, 100);
  CHECK(berry_esseen_bound(m) == doctest::Approx(6.0 * t_p / (10.0 * std::pow(v_p, 1.5))));
}

TEST_CASE("berry-esseen envelope vs exact iid sums") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t size = 2 + uniform_below(rng, 3);
    const auto base = random_distribution(rng, size);
    std::vector<double> score(size);
    for (auto& s : score) s = -1.0 + 2.0 * unit_double(rng);
    const int count = 2 + static_cast<int>(uniform_below(rng, 11));  // up to 12

    double mu = 0.0;
    for (std::size_t i = 0; i < size; ++i) mu += base.prob(i) * score[i];
    double var = 0.0, t_abs = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
      var += base.prob(i) * (score[i] - mu) * (score[i] - mu);
      t_abs += base.prob(i) * std::pow(std::abs(score[i] - mu), 3);
    }
    if (var < 1e-6) continue;
    const auto m = GaussianMoments::iid(mu, var, t_abs, static_cast<std::uint64_t>(count));
    const double bound = berry_esseen_bound(m);
    const double sigma = std::sqrt(m.variance);

    const auto law = iid_sum_distribution(score, base, static_cast<std::uint64_t>(count));
    for (const auto& atom : law.atoms()) {
      const double lambda = (atom.value - m.mean) / sigma;
      const double exact_tail = law.tail_geq(atom.value);
      CHECK(std::abs(exact_tail - q_function(lambda)) <= bound + 1e-12);
    }
  }
}

TEST_CASE("sum distribution invariants") {
  const auto base = FiniteDistribution::from_probs({0.25, 0.75});
  const std::vector<double> score9 = {-1.0, 2.5};
  const auto law = iid_sum_distribution(score9, base, 9);
  CHECK(law.total_prob() == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 1; i < law.atoms().size(); ++i) {
    CHECK(law.atoms()[i].value > law.atoms()[i - 1].value);
  }
  // mean and variance against per-summand moments
  const double mu = 0.25 * -1.0 + 0.75 * 2.5;
  const double var = 0.25 * std::pow(-1.0 - mu, 2) + 0.75 * std::pow(2.5 - mu, 2);
  CHECK(law.mean() == doctest::Approx(9.0 * mu).epsilon(1e-12));
  CHECK(law.variance() == doctest::Approx(9.0 * var).epsilon(1e-10));
}

TEST_CASE("chi squared survival function sanity") {
  // Median of chi2 with 1 dof is about 0.4549.
  CHECK(chi_squared_sf(0.4549, 1) == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(chi_squared_sf(0.0, 3) == doctest::Approx(1.0));
  CHECK(chi_squared_sf(100.0, 3) < 1e-10);
}
