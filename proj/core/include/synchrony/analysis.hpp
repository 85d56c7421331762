#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "synchrony/dynamics.hpp"

namespace synchrony {

struct SyncReport {
  std::optional<int> action_sync_tick;     // first t with Pro(t) = 1 (exact)
  std::optional<int> threshold_sync_tick;  // first t with total_deviation < eps
  double eps = 0.0;
};

// Scans a trajectory once. eps defaults to 1e-6 * n when <= 0 (scale-free in
// agent count).
SyncReport detect_sync(const Trajectory& traj, double eps = 0.0);

// Connected components of the subgraph induced by acting agents, sorted by
// size descending (ties by smallest member).
std::vector<std::vector<int>> detect_clusters(const SystemState& state, const Graph& graph);

// One collective-action wave: a maximal run of ticks with at least one actor.
//   t1: first tick with an actor (wave start)
//   t2: first tick in the wave with every agent acting (absent in partial waves)
//   t3: first all-quiet tick after the wave (absent when the wave outlives the record)
//   t4: start of the next wave (absent for the last recorded wave)
struct Wave {
  int t1 = 0;
  std::optional<int> t2;
  std::optional<int> t3;
  std::optional<int> t4;
  double peak_pro = 0.0;

  bool complete() const { return t2.has_value() && t3.has_value(); }
};

struct CycleReport {
  std::vector<Wave> waves;
  int wave_count = 0;  // waves that reached full participation and ended
  std::optional<double> mean_period;  // mean gap between consecutive wave starts
  double mean_peak_pro = 0.0;         // over all waves
};

CycleReport stage_decompose(const Trajectory& traj);

// Boundary degrees where the sync outcome flips, scanning d in ascending
// order. The non-monotone low-fail / mid-succeed / high-fail pattern shows up
// as a fail->sync flip followed by a sync->fail flip. Throws NoTransition
// when outcomes never flip.
struct DegreeFlip {
  double d_lo = 0;
  double d_hi = 0;
  bool to_sync = false;  // outcome at d_hi
};
struct PhaseTransition {
  std::vector<DegreeFlip> flips;
  // Set when the outcomes form the mid-window pattern: the sync window's
  // boundary intervals (d_lo*, d_hi*].
  std::optional<std::pair<DegreeFlip, DegreeFlip>> window;
};
PhaseTransition find_phase_transition(const std::map<double, bool>& sweep_results);

// Empirical check of the spontaneous-diffusion lemma on a k-regular ring:
// identical willingness p for every agent, f = 1/2, identity linkage, one
// seed actor, no forced activation. Premise: 1/k > ((1-p)/p) * max T_i(0).
// Conclusion: Pro reaches 1 within the horizon (and is absorbing under the
// premise). A discrepancy (premise true, conclusion false) is reported, not
// thrown; callers decide what to do with counterexamples.
struct Lemma2Certificate {
  int n = 0;
  int k = 0;
  double p = 0.0;
  int horizon = 0;
  double premise_lhs = 0.0;  // 1/k
  double premise_rhs = 0.0;  // ((1-p)/p) * max T(0)
  bool premise = false;
  bool conclusion = false;
  std::optional<int> sync_tick;
  bool discrepancy = false;
  std::optional<SystemState> counterexample;  // final state when premise && !conclusion
};

Lemma2Certificate verify_lemma2(int n, int k, double p, const std::vector<double>& t0,
                                int horizon);

// Full-synchronization check: premises are k > n/2 plus the two
// odds-form inequalities p > k * (1 - p) evaluated on the raw closed-form
// willingness of each type. Conclusion additionally requires threshold
// consensus (total deviation below eps).
struct Theorem1Certificate {
  int n = 0;
  int k = 0;
  GameParams params;
  int horizon = 0;
  bool premise_degree = false;
  bool premise_active = false;
  bool premise_inactive = false;
  bool premise = false;
  bool action_sync = false;
  bool threshold_sync = false;
  bool conclusion = false;
  bool discrepancy = false;
  std::optional<SystemState> counterexample;
};

Theorem1Certificate verify_theorem1(int n, int k, const GameParams& params,
                                    const std::vector<double>& t0, int horizon,
                                    double active_fraction = 0.5, std::uint64_t seed = 0);

// One periodic-driver run summarized through stage_decompose. The action
// cycle property is comparative (peak vs trough activation, long vs short
// period); callers pair certificates to draw those comparisons.
struct Theorem2Certificate {
  double period = 0.0;
  int horizon = 0;
  int events = 0;
  double coordination_dev = 0.0;
  int complete_waves = 0;
  int total_waves = 0;
  double mean_peak_pro = 0.0;
  std::optional<double> mean_period;
};

Theorem2Certificate verify_theorem2(const CycleDriver& driver, const ActivationSchedule& schedule,
                                    const Graph& graph, const SimConfig& config, int horizon);

// Certificates as JSON documents (premises, conclusion, counterexample dump).
std::string to_json(const Lemma2Certificate& cert);
std::string to_json(const Theorem1Certificate& cert);
std::string to_json(const Theorem2Certificate& cert);

}  // namespace synchrony
