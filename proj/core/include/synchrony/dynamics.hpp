#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "synchrony/drivers.hpp"
#include "synchrony/game.hpp"
#include "synchrony/graph.hpp"

namespace synchrony {

// Affine linkage between the averaged state fields and the quantities the
// action rule compares:
//   thrust_i     = a_p + b_p * P_i   (perception -> action thrust)
//   resistance_i = a_T + b_T * T_i   (threshold  -> action resistance)
// The identity linkage (0,1,0,1) reproduces the bare model.
struct AffineLinkage {
  double a_p = 0.0;
  double b_p = 1.0;
  double a_T = 0.0;
  double b_T = 1.0;

  static AffineLinkage identity() { return {}; }
};

struct ThresholdUniform {
  double lo = 0.0;
  double hi = 0.5;
};
struct ThresholdConstant {
  double c = 0.2;
};
using ThresholdInit = std::variant<ThresholdUniform, ThresholdConstant, std::vector<double>>;

struct InitialActorCount {
  int count = 1;
};
using InitialActors = std::variant<InitialActorCount, std::vector<int>>;

// Full per-agent state of the coupled threshold / perception / action system
// at one tick. Synchronous semantics: every tick-(t+1) field is a function of
// tick-t fields only.
struct SystemState {
  int t = 0;
  std::vector<AgentType> types;
  std::vector<std::uint8_t> actions;
  std::vector<double> thresholds;   // action resistance T_i(t) in [0,1]
  std::vector<double> perceptions;  // acting-neighbor fraction P_i(t) in [0,1]

  int size() const { return static_cast<int>(types.size()); }
  int actor_count() const;
};

struct SimConfig {
  std::optional<GameParams> game;
  // Direct per-type willingness (p_active, p_inactive); bypasses the game
  // solve when set (the lemma harnesses drive willingness directly).
  std::optional<std::pair<double, double>> willingness;

  double active_fraction = 1.0;  // P(type = active); independent across agents
  std::optional<std::vector<AgentType>> explicit_types;

  ThresholdInit threshold_init = ThresholdUniform{};
  InitialActors initial_actors = InitialActorCount{1};
  AffineLinkage linkage;
  // Averaging uses the open neighborhood by default; the closed variant
  // (self included) is available for sensitivity runs.
  bool closed_neighborhood_averaging = false;
  std::uint64_t seed = 0;

  void validate() const;
  EquilibriumProbs resolve_willingness() const;
};

// Per-tick record of a run: Pro(t) = acting fraction, TotalDeviation(t) =
// sum of squared threshold deviations from the mean. `states` is empty when
// a run is asked not to record full states.
struct Trajectory {
  int n = 0;
  std::vector<SystemState> states;
  std::vector<int> actor_counts;
  std::vector<double> pro;
  std::vector<double> total_deviation;

  int horizon() const { return static_cast<int>(pro.size()) - 1; }
};

double total_threshold_deviation(const std::vector<double>& thresholds);

// Draws types, thresholds and the initial actor set; perceptions start at 0.
// Deterministic for a fixed config.seed.
SystemState init_state(const Graph& graph, const SimConfig& config);

// One synchronous tick, in order:
//   (1) thresholds:  T_i(t+1) = mean of T_j(t) over N(i)
//   (2) perceptions: P_i(t+1) = sum_{j in N(i)} a_j(t) / deg(i)
//   (3) actions:     a_i(t+1) = 1 iff
//         f_i(t) * p_type(i) * (a_p + b_p * P_i(t+1))
//           > (1 - f_i(t)) * (1 - p_type(i)) * (a_T + b_T * T_i(t+1))
// Strict inequality: ties resolve to not acting. `forced` lists agents whose
// t+1 action bit is overridden to 1 (their thresholds keep averaging).
SystemState step(const SystemState& state, const Graph& graph, const EquilibriumProbs& probs,
                 const std::vector<double>& f_values, const std::vector<int>& forced,
                 const AffineLinkage& linkage, bool closed_neighborhood_averaging = false);

// Homogeneous-driver convenience overload.
SystemState step(const SystemState& state, const Graph& graph, const EquilibriumProbs& probs,
                 double f_value, const std::vector<int>& forced, const AffineLinkage& linkage,
                 bool closed_neighborhood_averaging = false);

// Applies step `horizon` times. Schedule events at tick tau force those
// action bits at tick tau (tau = 0 merges into the initial actor set).
// Willingness probabilities are resolved once from the config.
Trajectory run(const Graph& graph, const SimConfig& config, const CycleDriver& driver,
               int horizon, const ActivationSchedule& schedule = {}, bool record_states = true);

// Trajectory export: one row per (t, agent) with columns
// t,agent,type,action,threshold,perception.
std::string trajectory_to_csv(const Trajectory& traj);
// Summary export: t,pro,total_deviation.
std::string summary_to_csv(const Trajectory& traj);

}  // namespace synchrony
