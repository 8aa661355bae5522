#pragma once

#include <span>
#include <vector>

#include "covert/distribution.hpp"

namespace covert {

// One binary-input DMC given by its two output rows over a common alphabet.
struct BinaryInputDmc {
  FiniteDistribution off;  // input 0, the innocent symbol
  FiniteDistribution on;   // input 1

  BinaryInputDmc(FiniteDistribution off_row, FiniteDistribution on_row);
  std::size_t output_size() const { return off.size(); }
};

BinaryInputDmc bsc(double crossover);

// Clamp for log-likelihood ratios of degenerate test channels (nats).
inline constexpr double kLlrClamp = 700.0;

// Per-symbol adversary score A(z) = (Q1(z) - Q0(z)) / Q0(z).
// E_Q0[A] = 0, E_Q0[A^2] = E_Q1[A] = chi2(Q1||Q0).
struct ScoreA {
  std::vector<double> values;
  static ScoreA from(const BinaryInputDmc& willie);
};

// The two channels of the covert communication problem: (P0, P1) to the
// receiver over Y and (Q0, Q1) to the adversary over Z, with the standing
// assumptions Q1 << Q0, P1 << P0 and Q1 != Q0. Degenerate test doubles that
// break absolute continuity are admitted only when explicitly requested, in
// which case LLRs are clamped at +-700 nats.
class CovertChannelPair {
 public:
  CovertChannelPair(BinaryInputDmc bob, BinaryInputDmc willie, bool allow_degenerate = false);
  static CovertChannelPair from_bsc(double p_bob, double p_willie);

  const BinaryInputDmc& bob() const { return bob_; }
  const BinaryInputDmc& willie() const { return willie_; }
  std::span<const double> bob_llr() const { return bob_llr_; }     // log P1/P0 per y
  std::span<const double> willie_llr() const { return willie_llr_; }  // log Q1/Q0 per z
  std::span<const double> score_a() const { return score_a_; }
  bool degenerate() const { return degenerate_; }

  double d_p() const { return d_p_; }
  double v_p() const { return v_p_; }
  double t_p() const { return t_p_; }
  double chi2_p() const { return chi2_p_; }
  double d_q() const { return d_q_; }
  double chi2_q() const { return chi2_q_; }
  double mu_z() const { return mu_z_; }

 private:
  BinaryInputDmc bob_;
  BinaryInputDmc willie_;
  std::vector<double> bob_llr_;
  std::vector<double> willie_llr_;
  std::vector<double> score_a_;
  bool degenerate_ = false;
  double d_p_ = 0, v_p_ = 0, t_p_ = 0, chi2_p_ = 0;
  double d_q_ = 0, chi2_q_ = 0, mu_z_ = 0;
};

}  // namespace covert
