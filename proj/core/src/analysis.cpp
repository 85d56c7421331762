#include "synchrony/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "json.hpp"

namespace synchrony {

SyncReport detect_sync(const Trajectory& traj, double eps) {
  SyncReport report;
  report.eps = (eps > 0.0) ? eps : 1e-6 * traj.n;
  for (std::size_t t = 0; t < traj.actor_counts.size(); ++t) {
    if (!report.action_sync_tick && traj.actor_counts[t] == traj.n)
      report.action_sync_tick = static_cast<int>(t);
    if (!report.threshold_sync_tick && traj.total_deviation[t] < report.eps)
      report.threshold_sync_tick = static_cast<int>(t);
    if (report.action_sync_tick && report.threshold_sync_tick) break;
  }
  return report;
}

std::vector<std::vector<int>> detect_clusters(const SystemState& state, const Graph& graph) {
  const int n = graph.n;
  std::vector<char> seen(n, 0);
  std::vector<std::vector<int>> components;
  for (int start = 0; start < n; ++start) {
    if (seen[start] || !state.actions[start]) continue;
    std::vector<int> comp;
    std::deque<int> queue{start};
    seen[start] = 1;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      comp.push_back(u);
      for (int v : graph.adj[u]) {
        if (!seen[v] && state.actions[v]) {
          seen[v] = 1;
          queue.push_back(v);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    components.push_back(std::move(comp));
  }
  std::stable_sort(components.begin(), components.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return components;
}

CycleReport stage_decompose(const Trajectory& traj) {
  CycleReport report;
  const int ticks = static_cast<int>(traj.actor_counts.size());
  int t = 0;
  while (t < ticks) {
    if (traj.actor_counts[t] == 0) {
      ++t;
      continue;
    }
    Wave wave;
    wave.t1 = t;
    while (t < ticks && traj.actor_counts[t] > 0) {
      if (!wave.t2 && traj.actor_counts[t] == traj.n) wave.t2 = t;
      wave.peak_pro = std::max(wave.peak_pro, traj.pro[t]);
      ++t;
    }
    if (t < ticks) wave.t3 = t;  // first all-quiet tick after the wave
    report.waves.push_back(wave);
  }
  for (std::size_t w = 0; w + 1 < report.waves.size(); ++w)
    report.waves[w].t4 = report.waves[w + 1].t1;

  double peak_sum = 0.0;
  double period_sum = 0.0;
  int period_count = 0;
  for (std::size_t w = 0; w < report.waves.size(); ++w) {
    const Wave& wave = report.waves[w];
    if (wave.complete()) ++report.wave_count;
    peak_sum += wave.peak_pro;
    if (w + 1 < report.waves.size()) {
      period_sum += report.waves[w + 1].t1 - wave.t1;
      ++period_count;
    }
  }
  if (!report.waves.empty()) peak_sum /= static_cast<double>(report.waves.size());
  report.mean_peak_pro = peak_sum;
  if (period_count > 0) report.mean_period = period_sum / period_count;
  return report;
}

PhaseTransition find_phase_transition(const std::map<double, bool>& sweep_results) {
  PhaseTransition result;
  if (sweep_results.size() < 2) throw NoTransition("phase transition: need at least 2 outcomes");
  auto it = sweep_results.begin();
  auto prev = it++;
  for (; it != sweep_results.end(); prev = it++) {
    if (prev->second != it->second)
      result.flips.push_back({prev->first, it->first, it->second});
  }
  if (result.flips.empty()) throw NoTransition("phase transition: outcomes never flip");
  if (result.flips.size() == 2 && result.flips[0].to_sync && !result.flips[1].to_sync)
    result.window = std::make_pair(result.flips[0], result.flips[1]);
  return result;
}

Lemma2Certificate verify_lemma2(int n, int k, double p, const std::vector<double>& t0,
                                int horizon) {
  if (p <= 0.0 || p > 1.0) throw ValidationError("lemma2: p must lie in (0, 1]");
  Lemma2Certificate cert;
  cert.n = n;
  cert.k = k;
  cert.p = p;
  cert.horizon = horizon;

  const Graph graph = make_regular_ring(n, k);
  SimConfig config;
  config.willingness = {p, p};
  config.explicit_types.emplace(n, AgentType::Active);
  config.threshold_init = t0;
  config.initial_actors = std::vector<int>{0};

  const double max_t0 = *std::max_element(t0.begin(), t0.end());
  cert.premise_lhs = 1.0 / k;
  cert.premise_rhs = ((1.0 - p) / p) * max_t0;
  cert.premise = cert.premise_lhs > cert.premise_rhs;

  const Trajectory traj = run(graph, config, CycleDriver::constant(0.5), horizon, {}, false);
  const SyncReport sync = detect_sync(traj);
  cert.sync_tick = sync.action_sync_tick;
  cert.conclusion = sync.action_sync_tick.has_value();
  cert.discrepancy = cert.premise && !cert.conclusion;
  if (cert.discrepancy) {
    // Rerun recording states to capture evidence of the failure.
    const Trajectory full = run(graph, config, CycleDriver::constant(0.5), horizon, {}, true);
    cert.counterexample = full.states.back();
  }
  return cert;
}

Theorem1Certificate verify_theorem1(int n, int k, const GameParams& params,
                                    const std::vector<double>& t0, int horizon,
                                    double active_fraction, std::uint64_t seed) {
  Theorem1Certificate cert;
  cert.n = n;
  cert.k = k;
  cert.params = params;
  cert.horizon = horizon;

  const EquilibriumProbs eq = solve_equilibrium(params);
  // Premises: degree above half the population, and odds above k for both
  // types' raw willingness values.
  cert.premise_degree = k > n / 2.0;
  cert.premise_active = eq.raw_active > k * (1.0 - eq.raw_active);
  cert.premise_inactive = eq.raw_inactive > k * (1.0 - eq.raw_inactive);
  cert.premise = cert.premise_degree && cert.premise_active && cert.premise_inactive;

  const Graph graph = make_regular_ring(n, k);
  SimConfig config;
  config.game = params;
  config.active_fraction = active_fraction;
  config.threshold_init = t0;
  config.initial_actors = std::vector<int>{0};
  config.seed = seed;

  const Trajectory traj = run(graph, config, CycleDriver::constant(0.5), horizon, {}, true);
  const SyncReport sync = detect_sync(traj);
  cert.action_sync = sync.action_sync_tick.has_value();
  cert.threshold_sync = sync.threshold_sync_tick.has_value();
  cert.conclusion = cert.action_sync && cert.threshold_sync;
  cert.discrepancy = cert.premise && !cert.conclusion;
  if (cert.discrepancy) cert.counterexample = traj.states.back();
  return cert;
}

Theorem2Certificate verify_theorem2(const CycleDriver& driver, const ActivationSchedule& schedule,
                                    const Graph& graph, const SimConfig& config, int horizon) {
  driver.validate();
  if (driver.period() <= 0.0)
    throw ValidationError("theorem2: driver must be periodic");
  if (schedule.empty()) throw EmptySchedule("theorem2: schedule is empty");

  Theorem2Certificate cert;
  cert.period = driver.period();
  cert.horizon = horizon;
  for (const auto& [tick, nodes] : schedule.events) cert.events += static_cast<int>(nodes.size());
  cert.coordination_dev = coordination_deviation(driver, schedule);

  const Trajectory traj = run(graph, config, driver, horizon, schedule, false);
  const CycleReport cycles = stage_decompose(traj);
  cert.complete_waves = cycles.wave_count;
  cert.total_waves = static_cast<int>(cycles.waves.size());
  cert.mean_peak_pro = cycles.mean_peak_pro;
  cert.mean_period = cycles.mean_period;
  return cert;
}

namespace {

nlohmann::json state_to_json(const SystemState& s) {
  nlohmann::json j;
  j["t"] = s.t;
  j["actions"] = s.actions;
  j["thresholds"] = s.thresholds;
  j["perceptions"] = s.perceptions;
  std::vector<std::string> types;
  types.reserve(s.types.size());
  for (AgentType ty : s.types)
    types.push_back(ty == AgentType::Active ? "active" : "non-active");
  j["types"] = types;
  return j;
}

}  // namespace

std::string to_json(const Lemma2Certificate& cert) {
  nlohmann::json j;
  j["kind"] = "lemma2";
  j["n"] = cert.n;
  j["k"] = cert.k;
  j["p"] = cert.p;
  j["horizon"] = cert.horizon;
  j["premise"] = {{"holds", cert.premise},
                  {"lhs_1_over_k", cert.premise_lhs},
                  {"rhs_ratio_times_max_t0", cert.premise_rhs}};
  j["conclusion"] = {{"holds", cert.conclusion}};
  if (cert.sync_tick) j["conclusion"]["sync_tick"] = *cert.sync_tick;
  j["discrepancy"] = cert.discrepancy;
  if (cert.counterexample) j["counterexample"] = state_to_json(*cert.counterexample);
  return j.dump(2);
}

std::string to_json(const Theorem1Certificate& cert) {
  nlohmann::json j;
  j["kind"] = "theorem1";
  j["n"] = cert.n;
  j["k"] = cert.k;
  j["params"] = {{"alpha", cert.params.alpha},
                 {"beta", cert.params.beta},
                 {"x", cert.params.x},
                 {"y", cert.params.y}};
  j["horizon"] = cert.horizon;
  j["premise"] = {{"holds", cert.premise},
                  {"degree", cert.premise_degree},
                  {"odds_active", cert.premise_active},
                  {"odds_inactive", cert.premise_inactive}};
  j["conclusion"] = {{"holds", cert.conclusion},
                     {"action_sync", cert.action_sync},
                     {"threshold_sync", cert.threshold_sync}};
  j["discrepancy"] = cert.discrepancy;
  if (cert.counterexample) j["counterexample"] = state_to_json(*cert.counterexample);
  return j.dump(2);
}

std::string to_json(const Theorem2Certificate& cert) {
  nlohmann::json j;
  j["kind"] = "theorem2";
  j["period"] = cert.period;
  j["horizon"] = cert.horizon;
  j["events"] = cert.events;
  j["coordination_dev"] = cert.coordination_dev;
  j["complete_waves"] = cert.complete_waves;
  j["total_waves"] = cert.total_waves;
  j["mean_peak_pro"] = cert.mean_peak_pro;
  if (cert.mean_period) j["mean_period"] = *cert.mean_period;
  return j.dump(2);
}

}  // namespace synchrony
