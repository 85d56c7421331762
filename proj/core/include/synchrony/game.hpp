#pragma once

#include <utility>

#include "synchrony/errors.hpp"

namespace synchrony {

inline constexpr double kBeliefGapTol = 1e-12;

// The four scalars of the two-player, two-type participation game.
//   alpha: private utility magnitude (obtained by own participation alone)
//   beta:  common utility magnitude (requires joint participation)
//   x: probability an active agent believes the counterpart is active
//   y: probability a non-active agent believes the counterpart is active
struct GameParams {
  double alpha = 0;
  double beta = 0;
  double x = 0;
  double y = 0;

  void validate() const;
};

enum class AgentType { Active, NonActive };
enum class Strategy { Act, NotAct };

// Per-type long-run willingness to act. The closed form
//   raw_active   = (alpha/beta) * (x + y - 2) / (x - y)
//   raw_inactive = (alpha/beta) * (x + y)     / (x - y)
// routinely leaves [0,1]; both the raw values and their clamps are kept.
// Dynamics consume only the clamped fields.
struct EquilibriumProbs {
  double p_act_active = 0;    // clamp of raw_active to [0,1]
  double p_act_inactive = 0;  // clamp of raw_inactive to [0,1]
  double raw_active = 0;
  double raw_inactive = 0;
};

// Closed-form mixed-equilibrium willingness per type. Throws
// DegenerateBeliefs when |x - y| <= 1e-12 (the denominator vanishes).
EquilibriumProbs solve_equilibrium(const GameParams& params);

// Bayesian expected utility of a pure strategy against a type-contingent
// opponent mix (q_active, q_inactive) = P(act | opponent type). The belief
// about the opponent's type depends on one's own type: x when active, y when
// non-active. NotAct always yields 0.
double expected_utility(AgentType own_type, Strategy own_strategy, const GameParams& params,
                        std::pair<double, double> opponent_mix);

struct BruteForceOutcome {
  EquilibriumProbs probs;   // raw_* = numeric root of the indifference system
  double max_residual = 0;  // max |EU(act) - EU(not act)| over the four agents at the root
  // True when the root lies strictly inside (0,1)^2 with all residuals below
  // 1e-6, i.e. a genuine interior mixed equilibrium exists. This is the
  // "no interior equilibrium" report; it is informational, not an error.
  bool interior_equilibrium = false;
  // Sign check at the clamped point for each coordinate that was clamped:
  // a corner at 0 wants EU(act) <= 0 there, a corner at 1 wants EU(act) >= 0.
  bool corner_best_response = false;
};

// Derivative-free oracle for solve_equilibrium: grid search plus local
// refinement over the two free probabilities (by player symmetry the four
// Selten agents reduce to one act-probability per type). Searches the unit
// square first; when no interior indifference point exists the search box is
// extended far enough to contain the unconstrained root, whose clamp is the
// value the closed form is checked against. grid >= 101.
BruteForceOutcome brute_force_equilibrium(const GameParams& params, int grid = 101);

}  // namespace synchrony
