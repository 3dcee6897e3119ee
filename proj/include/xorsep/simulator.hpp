#pragma once

#include <iosfwd>
#include <vector>

#include "xorsep/games.hpp"
#include "xorsep/types.hpp"

namespace xorsep {

// Joint outcome distribution over sign patterns a in {+1,-1}^k (index bit per
// player, 0 meaning +1, player 0 slowest). Probabilities are clipped to [0,1]
// at tolerance 1e-10 and renormalized; a total drift beyond 1e-8 throws.
struct OutcomeTable {
  int k = 1;
  RVector probs;        // length 2^k
  double correlation;   // sum_a prod_i a_i * P(a)
  double clip_drift;    // |1 - raw mass| before renormalization
};

OutcomeTable outcome_distribution(const EntangledStrategy& strat, const CMatrix& rho);
OutcomeTable outcome_distribution(const ProductStrategy& strat, const CMatrix& rho);

// Empirical game value over i.i.d. rounds: draw a question x from the game's
// two-question decomposition, then an outcome pattern from the per-question
// table (stream "sim/play"). analytic_bias is the strategy's exact bias
// sum_x p_x c_x corr_x; z_score = (empirical - analytic) /
// sqrt((1 - analytic^2)/rounds).
struct PlayResult {
  std::uint64_t rounds = 0;
  double empirical_bias = 0.0;
  double analytic_bias = 0.0;
  double z_score = 0.0;
};

PlayResult play_tables(const GameDecomposition& decomposition,
                       const std::vector<OutcomeTable>& tables, std::uint64_t rounds,
                       std::uint64_t seed, std::ostream* round_log = nullptr);

PlayResult play(const QuantumXorGame& game, const EntangledStrategy& strat,
                std::uint64_t rounds, std::uint64_t seed,
                std::ostream* round_log = nullptr);

PlayResult play(const QuantumXorGame& game, const ProductStrategy& strat,
                std::uint64_t rounds, std::uint64_t seed,
                std::ostream* round_log = nullptr);

}  // namespace xorsep
