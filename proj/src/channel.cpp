#include "covert/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace covert {

BinaryInputDmc::BinaryInputDmc(FiniteDistribution off_row, FiniteDistribution on_row)
    : off(std::move(off_row)), on(std::move(on_row)) {
  if (!off.same_alphabet(on)) throw AlphabetMismatch("channel rows on different alphabets");
}

BinaryInputDmc bsc(double crossover) {
  if (!(crossover >= 0.0 && crossover <= 1.0)) throw InvalidParams("crossover outside [0,1]");
  return BinaryInputDmc(FiniteDistribution::from_probs({1.0 - crossover, crossover}),
                        FiniteDistribution::from_probs({crossover, 1.0 - crossover}));
}

ScoreA ScoreA::from(const BinaryInputDmc& willie) {
  ScoreA s;
  s.values.resize(willie.output_size(), 0.0);
  for (std::size_t z = 0; z < willie.output_size(); ++z) {
    const double q0 = willie.off.prob(z);
    const double q1 = willie.on.prob(z);
    if (q0 > 0.0) {
      s.values[z] = (q1 - q0) / q0;
    } else if (q1 > 0.0) {
      throw AssumptionViolation("Q1 not absolutely continuous w.r.t. Q0");
    }
  }
  return s;
}

namespace {

bool absolutely_continuous(const FiniteDistribution& p, const FiniteDistribution& q) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.prob(i) > 0.0 && q.prob(i) == 0.0) return false;
  }
  return true;
}

std::vector<double> llr_table(const BinaryInputDmc& dmc, bool clamp) {
  std::vector<double> llr(dmc.output_size(), 0.0);
  for (std::size_t i = 0; i < dmc.output_size(); ++i) {
    const double p1 = dmc.on.prob(i);
    const double p0 = dmc.off.prob(i);
    if (p1 > 0.0 && p0 > 0.0) {
      llr[i] = std::log(p1 / p0);
    } else if (p1 > 0.0 && p0 == 0.0) {
      llr[i] = clamp ? kLlrClamp : std::numeric_limits<double>::infinity();
    } else if (p1 == 0.0 && p0 > 0.0) {
      llr[i] = clamp ? -kLlrClamp : -std::numeric_limits<double>::infinity();
    }
  }
  return llr;
}

}  // namespace

CovertChannelPair::CovertChannelPair(BinaryInputDmc bob, BinaryInputDmc willie,
                                     bool allow_degenerate)
    : bob_(std::move(bob)), willie_(std::move(willie)) {
  const bool p_ok = absolutely_continuous(bob_.on, bob_.off);
  const bool q_ok = absolutely_continuous(willie_.on, willie_.off);
  bool q_equal = true;
  for (std::size_t z = 0; z < willie_.output_size(); ++z) {
    if (std::abs(willie_.on.prob(z) - willie_.off.prob(z)) > 1e-15) q_equal = false;
  }
  if (!p_ok || !q_ok || q_equal) {
    if (!allow_degenerate) {
      throw AssumptionViolation("needs Q1 << Q0, P1 << P0 and Q1 != Q0");
    }
    degenerate_ = true;
  }

  bob_llr_ = llr_table(bob_, /*clamp=*/true);
  willie_llr_ = llr_table(willie_, /*clamp=*/true);
  if (q_ok) {
    score_a_ = ScoreA::from(willie_).values;
  } else {
    score_a_.assign(willie_.output_size(), 0.0);
  }

  // D_P, V_P, T_P from the LLR under P1; divergence constants to the adversary.
  for (std::size_t y = 0; y < bob_.output_size(); ++y) {
    const double p1 = bob_.on.prob(y);
    if (p1 > 0.0) d_p_ += p1 * bob_llr_[y];
  }
  for (std::size_t y = 0; y < bob_.output_size(); ++y) {
    const double p1 = bob_.on.prob(y);
    if (p1 == 0.0) continue;
    const double dev = bob_llr_[y] - d_p_;
    v_p_ += p1 * dev * dev;
    t_p_ += p1 * std::pow(std::abs(dev), 3);
  }
  for (std::size_t y = 0; y < bob_.output_size(); ++y) {
    const double d = bob_.on.prob(y) - bob_.off.prob(y);
    if (bob_.off.prob(y) > 0.0) chi2_p_ += d * d / bob_.off.prob(y);
  }
  for (std::size_t z = 0; z < willie_.output_size(); ++z) {
    const double q1 = willie_.on.prob(z);
    if (q1 > 0.0) d_q_ += q1 * willie_llr_[z];
    const double d = q1 - willie_.off.prob(z);
    if (willie_.off.prob(z) > 0.0) chi2_q_ += d * d / willie_.off.prob(z);
  }

  mu_z_ = std::numeric_limits<double>::infinity();
  for (std::size_t z = 0; z < willie_.output_size(); ++z) {
    for (double q : {willie_.off.prob(z), willie_.on.prob(z)}) {
      if (q > 0.0) mu_z_ = std::min(mu_z_, q);
    }
  }
}

CovertChannelPair CovertChannelPair::from_bsc(double p_bob, double p_willie) {
  return CovertChannelPair(bsc(p_bob), bsc(p_willie));
}

}  // namespace covert
