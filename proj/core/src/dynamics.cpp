#include "synchrony/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "synchrony/csv.hpp"
#include "synchrony/rng.hpp"

namespace synchrony {

int SystemState::actor_count() const {
  return static_cast<int>(std::count(actions.begin(), actions.end(), std::uint8_t{1}));
}

void SimConfig::validate() const {
  if (!game && !willingness)
    throw ValidationError("sim: either game params or a willingness override is required");
  if (game) game->validate();
  if (willingness) {
    const auto& [pa, pi] = *willingness;
    if (pa < 0 || pa > 1 || pi < 0 || pi > 1)
      throw ValidationError("sim: willingness overrides must lie in [0, 1]");
  }
  if (active_fraction < 0.0 || active_fraction > 1.0)
    throw ValidationError("sim: active_fraction must lie in [0, 1]");
  if (const auto* u = std::get_if<ThresholdUniform>(&threshold_init)) {
    if (!(0.0 <= u->lo && u->lo <= u->hi && u->hi <= 1.0))
      throw ValidationError("sim: threshold uniform bounds need 0 <= lo <= hi <= 1");
  } else if (const auto* c = std::get_if<ThresholdConstant>(&threshold_init)) {
    if (c->c < 0.0 || c->c > 1.0) throw ValidationError("sim: constant threshold must lie in [0, 1]");
  }
}

EquilibriumProbs SimConfig::resolve_willingness() const {
  if (willingness) {
    EquilibriumProbs eq;
    eq.p_act_active = eq.raw_active = willingness->first;
    eq.p_act_inactive = eq.raw_inactive = willingness->second;
    return eq;
  }
  return solve_equilibrium(*game);
}

double total_threshold_deviation(const std::vector<double>& thresholds) {
  if (thresholds.empty()) return 0.0;
  const double mean = std::accumulate(thresholds.begin(), thresholds.end(), 0.0) /
                      static_cast<double>(thresholds.size());
  double dev = 0.0;
  for (double t : thresholds) dev += (t - mean) * (t - mean);
  return dev;
}

SystemState init_state(const Graph& graph, const SimConfig& config) {
  config.validate();
  if (!graph.connected) throw ValidationError("sim: dynamics require a connected graph");
  const int n = graph.n;
  Rng rng(derive_seed(config.seed, 0x1417u));

  SystemState s;
  s.t = 0;

  if (config.explicit_types) {
    if (static_cast<int>(config.explicit_types->size()) != n)
      throw ValidationError("sim: explicit type vector length != n");
    s.types = *config.explicit_types;
  } else {
    s.types.resize(n);
    for (int i = 0; i < n; ++i)
      s.types[i] = rng.bernoulli(config.active_fraction) ? AgentType::Active
                                                         : AgentType::NonActive;
  }

  if (const auto* u = std::get_if<ThresholdUniform>(&config.threshold_init)) {
    s.thresholds.resize(n);
    for (int i = 0; i < n; ++i) s.thresholds[i] = rng.uniform(u->lo, u->hi);
  } else if (const auto* c = std::get_if<ThresholdConstant>(&config.threshold_init)) {
    s.thresholds.assign(n, c->c);
  } else {
    const auto& v = std::get<std::vector<double>>(config.threshold_init);
    if (static_cast<int>(v.size()) != n)
      throw BadInitialActors("sim: explicit threshold vector length != n");
    for (double t : v)
      if (t < 0.0 || t > 1.0) throw ValidationError("sim: thresholds must lie in [0, 1]");
    s.thresholds = v;
  }

  s.actions.assign(n, 0);
  if (const auto* count = std::get_if<InitialActorCount>(&config.initial_actors)) {
    if (count->count < 0 || count->count > n)
      throw BadInitialActors("sim: initial actor count out of range");
    // Sample without replacement, fixed order.
    std::vector<int> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    for (int k = 0; k < count->count; ++k) {
      const int j = k + rng.below(n - k);
      std::swap(ids[k], ids[j]);
      s.actions[ids[k]] = 1;
    }
  } else {
    for (int node : std::get<std::vector<int>>(config.initial_actors)) {
      if (node < 0 || node >= n)
        throw BadInitialActors("sim: initial actor " + std::to_string(node) + " out of range");
      s.actions[node] = 1;
    }
  }

  s.perceptions.assign(n, 0.0);
  return s;
}

SystemState step(const SystemState& state, const Graph& graph, const EquilibriumProbs& probs,
                 const std::vector<double>& f_values, const std::vector<int>& forced,
                 const AffineLinkage& linkage, bool closed_neighborhood_averaging) {
  const int n = graph.n;
  if (state.size() != n) throw ValidationError("sim: state size does not match graph");
  if (static_cast<int>(f_values.size()) != n)
    throw ValidationError("sim: driver value vector length != n");

  SystemState next;
  next.t = state.t + 1;
  next.types = state.types;
  next.thresholds.resize(n);
  next.perceptions.resize(n);
  next.actions.assign(n, 0);

  for (int i = 0; i < n; ++i) {
    const auto& nb = graph.adj[i];
    double t_sum = 0.0;
    int acting = 0;
    for (int j : nb) {
      t_sum += state.thresholds[j];
      acting += state.actions[j];
    }
    const int deg = static_cast<int>(nb.size());
    if (closed_neighborhood_averaging) {
      next.thresholds[i] = (t_sum + state.thresholds[i]) / (deg + 1);
    } else {
      next.thresholds[i] = t_sum / deg;
    }
    next.perceptions[i] = static_cast<double>(acting) / deg;
  }

  for (int i = 0; i < n; ++i) {
    const double p = (state.types[i] == AgentType::Active) ? probs.p_act_active
                                                           : probs.p_act_inactive;
    const double f = f_values[i];
    const double thrust = linkage.a_p + linkage.b_p * next.perceptions[i];
    const double resistance = linkage.a_T + linkage.b_T * next.thresholds[i];
    next.actions[i] = (f * p * thrust > (1.0 - f) * (1.0 - p) * resistance) ? 1 : 0;
  }
  for (int i : forced) {
    if (i < 0 || i >= n) throw BadInitialActors("sim: forced agent out of range");
    next.actions[i] = 1;
  }
  return next;
}

SystemState step(const SystemState& state, const Graph& graph, const EquilibriumProbs& probs,
                 double f_value, const std::vector<int>& forced, const AffineLinkage& linkage,
                 bool closed_neighborhood_averaging) {
  return step(state, graph, probs, std::vector<double>(graph.n, f_value), forced, linkage,
              closed_neighborhood_averaging);
}

Trajectory run(const Graph& graph, const SimConfig& config, const CycleDriver& driver,
               int horizon, const ActivationSchedule& schedule, bool record_states) {
  if (horizon < 1) throw ValidationError("sim: horizon must be >= 1");
  driver.validate();
  schedule.validate(graph.n);
  const EquilibriumProbs probs = config.resolve_willingness();

  SystemState state = init_state(graph, config);
  if (const auto* forced0 = schedule.at(0))
    for (int i : *forced0) state.actions[i] = 1;

  Trajectory traj;
  traj.n = graph.n;
  traj.actor_counts.reserve(horizon + 1);
  traj.pro.reserve(horizon + 1);
  traj.total_deviation.reserve(horizon + 1);

  const bool homogeneous = !driver.per_agent.has_value();
  std::vector<double> f_values(graph.n, 0.0);
  static const std::vector<int> kNoForced;

  auto record = [&](const SystemState& s) {
    const int acting = s.actor_count();
    traj.actor_counts.push_back(acting);
    traj.pro.push_back(static_cast<double>(acting) / graph.n);
    traj.total_deviation.push_back(total_threshold_deviation(s.thresholds));
    if (record_states) traj.states.push_back(s);
  };

  record(state);
  for (int t = 0; t < horizon; ++t) {
    if (homogeneous) {
      f_values.assign(graph.n, evaluate(driver, 0, t));
    } else {
      for (int i = 0; i < graph.n; ++i) f_values[i] = evaluate(driver, i, t);
    }
    const std::vector<int>* forced = schedule.at(t + 1);
    state = step(state, graph, probs, f_values, forced ? *forced : kNoForced, config.linkage,
                 config.closed_neighborhood_averaging);
    record(state);
  }
  return traj;
}

std::string trajectory_to_csv(const Trajectory& traj) {
  std::ostringstream out;
  out << "t,agent,type,action,threshold,perception\n";
  for (const auto& s : traj.states) {
    for (int i = 0; i < s.size(); ++i) {
      out << s.t << ',' << i << ',' << (s.types[i] == AgentType::Active ? "active" : "non-active")
          << ',' << static_cast<int>(s.actions[i]) << ',' << csv::num(s.thresholds[i]) << ','
          << csv::num(s.perceptions[i]) << '\n';
    }
  }
  return out.str();
}

std::string summary_to_csv(const Trajectory& traj) {
  std::ostringstream out;
  out << "t,pro,total_deviation\n";
  for (std::size_t t = 0; t < traj.pro.size(); ++t)
    out << t << ',' << csv::num(traj.pro[t]) << ',' << csv::num(traj.total_deviation[t]) << '\n';
  return out.str();
}

}  // namespace synchrony
