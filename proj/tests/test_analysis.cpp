#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <numeric>

#include "doctest.h"
#include "synchrony/analysis.hpp"
#include "synchrony/recipes.hpp"
#include "synchrony/rng.hpp"

using namespace synchrony;

namespace {

// Builds a trajectory carrying only the action bookkeeping, from per-tick
// actor counts of a population of n agents.
Trajectory traj_from_counts(const std::vector<int>& counts, int n) {
  Trajectory t;
  t.n = n;
  t.actor_counts = counts;
  for (int c : counts) {
    t.pro.push_back(static_cast<double>(c) / n);
    t.total_deviation.push_back(0.0);
  }
  return t;
}

SystemState state_with_actions(const Graph& g, std::vector<std::uint8_t> actions) {
  SystemState s;
  s.types.assign(g.n, AgentType::Active);
  s.actions = std::move(actions);
  s.thresholds.assign(g.n, 0.2);
  s.perceptions.assign(g.n, 0.0);
  return s;
}

}  // namespace

TEST_CASE("detect_sync on a constant all-acting record") {
  const auto traj = traj_from_counts({5, 5, 5}, 5);
  const auto report = detect_sync(traj);
  REQUIRE(report.action_sync_tick.has_value());
  CHECK(*report.action_sync_tick == 0);
}

TEST_CASE("detect_sync on an all-quiet record") {
  const auto traj = traj_from_counts({0, 0, 0, 0}, 5);
  CHECK_FALSE(detect_sync(traj).action_sync_tick.has_value());
}

TEST_CASE("detect_sync threshold consensus tick") {
  Trajectory traj = traj_from_counts({0, 0, 0}, 4);
  traj.total_deviation = {0.5, 1e-7, 1e-9};
  const auto report = detect_sync(traj);  // eps defaults to 1e-6 * n
  REQUIRE(report.threshold_sync_tick.has_value());
  CHECK(*report.threshold_sync_tick == 1);
  CHECK(report.eps == doctest::Approx(4e-6));
}

TEST_CASE("clusters on C5, hand-checked") {
  // On the 5-cycle nodes 4 and 0 are adjacent, so actors {0, 1, 4} fuse into
  // one component.
  const Graph g = make_regular_ring(5, 2);
  const auto comps = detect_clusters(state_with_actions(g, {1, 1, 0, 0, 1}), g);
  REQUIRE(comps.size() == 1);
  CHECK(comps[0] == std::vector<int>{0, 1, 4});
}

TEST_CASE("clusters on a path where actors split") {
  const Graph g = parse_edge_list("0 1\n1 2\n2 3\n3 4\n");
  const auto comps = detect_clusters(state_with_actions(g, {1, 1, 0, 0, 1}), g);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0] == std::vector<int>{0, 1});
  CHECK(comps[1] == std::vector<int>{4});
}

TEST_CASE("clusters cover everyone or no one") {
  const Graph g = make_small_world({20, 4, 0.3, 4});
  const auto all = detect_clusters(state_with_actions(g, std::vector<std::uint8_t>(20, 1)), g);
  REQUIRE(all.size() == 1);
  CHECK(all[0].size() == 20);
  CHECK(detect_clusters(state_with_actions(g, std::vector<std::uint8_t>(20, 0)), g).empty());
}

TEST_CASE("cluster components partition the actor set") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = make_small_world({30, 4, 0.4, rng.raw()});
    std::vector<std::uint8_t> actions(30);
    int actors = 0;
    for (auto& a : actions) {
      a = rng.bernoulli(0.4) ? 1 : 0;
      actors += a;
    }
    const auto comps = detect_clusters(state_with_actions(g, actions), g);
    std::size_t total = 0;
    for (const auto& c : comps) total += c.size();
    CHECK(static_cast<int>(total) == actors);
    for (std::size_t i = 1; i < comps.size(); ++i) CHECK(comps[i - 1].size() >= comps[i].size());
  }
}

TEST_CASE("stage decomposition of the reference pulse") {
  // Pro: 0, 0, 0.2, 1, 1, 0.3, 0, 0, 0.1  ->  t1=2, t2=3, t3=6, t4=8.
  const auto traj = traj_from_counts({0, 0, 2, 10, 10, 3, 0, 0, 1}, 10);
  const auto report = stage_decompose(traj);
  REQUIRE(report.waves.size() == 2);
  const Wave& first = report.waves[0];
  CHECK(first.t1 == 2);
  REQUIRE(first.t2.has_value());
  CHECK(*first.t2 == 3);
  REQUIRE(first.t3.has_value());
  CHECK(*first.t3 == 6);
  REQUIRE(first.t4.has_value());
  CHECK(*first.t4 == 8);
  CHECK(first.peak_pro == doctest::Approx(1.0));
  CHECK(report.wave_count == 1);  // the trailing partial wave never completed
  CHECK(report.waves[1].t1 == 8);
  CHECK_FALSE(report.waves[1].t3.has_value());
}

TEST_CASE("stage decomposition of quiet and unending records") {
  CHECK(stage_decompose(traj_from_counts({0, 0, 0}, 5)).waves.empty());
  const auto report = stage_decompose(traj_from_counts({0, 2, 3, 3}, 5));
  REQUIRE(report.waves.size() == 1);
  CHECK_FALSE(report.waves[0].t3.has_value());
  CHECK_FALSE(report.waves[0].t4.has_value());
  CHECK(report.wave_count == 0);
}

TEST_CASE("stage decomposition round-trips the any-actor series") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const int len = 5 + rng.below(60);
    std::vector<int> counts(len);
    for (int& c : counts) c = rng.bernoulli(0.5) ? rng.below(4) : 0;
    const auto traj = traj_from_counts(counts, 4);
    const auto report = stage_decompose(traj);
    std::vector<char> rebuilt(len, 0);
    for (const auto& wave : report.waves) {
      const int end = wave.t3 ? *wave.t3 : len;
      for (int t = wave.t1; t < end; ++t) rebuilt[t] = 1;
    }
    for (int t = 0; t < len; ++t) CHECK(static_cast<bool>(rebuilt[t]) == (counts[t] > 0));
    for (const auto& wave : report.waves) {
      if (wave.t2) CHECK(wave.t1 <= *wave.t2);
      if (wave.t2 && wave.t3) CHECK(*wave.t2 < *wave.t3);
      if (wave.t3 && wave.t4) CHECK(*wave.t3 <= *wave.t4);
    }
  }
}

TEST_CASE("phase transition window detection") {
  const auto result = find_phase_transition({{2, false}, {3, true}, {5, true}, {8, false}});
  REQUIRE(result.flips.size() == 2);
  CHECK(result.flips[0].d_lo == 2);
  CHECK(result.flips[0].d_hi == 3);
  CHECK(result.flips[0].to_sync);
  CHECK(result.flips[1].d_lo == 5);
  CHECK(result.flips[1].d_hi == 8);
  CHECK_FALSE(result.flips[1].to_sync);
  REQUIRE(result.window.has_value());
}

TEST_CASE("phase transition requires a flip") {
  CHECK_THROWS_AS(find_phase_transition({{3, true}, {5, true}}), NoTransition);
  CHECK_THROWS_AS(find_phase_transition({{2, false}, {4, false}}), NoTransition);
  CHECK_THROWS_AS(find_phase_transition({{2, false}}), NoTransition);
}

TEST_CASE("total deviation never grows on connected graphs") {
  Rng rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = make_small_world({30, 6, 0.3, rng.raw()});
    SimConfig cfg;
    cfg.willingness = {0.7, 0.3};
    cfg.active_fraction = 0.5;
    cfg.threshold_init = ThresholdUniform{0.0, 1.0};
    cfg.seed = rng.raw();
    const Trajectory traj = run(g, cfg, CycleDriver::constant(0.5), 40, {}, false);
    for (std::size_t t = 1; t < traj.total_deviation.size(); ++t)
      CHECK(traj.total_deviation[t] <= traj.total_deviation[t - 1] + 1e-9);
  }
}

// Frozen from running the dynamics: a lone seed on an even cycle feeds an
// actor set that alternates between the two parity classes, so simultaneous
// full participation never arrives even though the premise holds; odd cycles
// and k=4 lattices cover the whole ring.
TEST_CASE("lemma2 certificates on even and odd cycles") {
  const std::vector<double> t02(8, 0.2);
  const auto even = verify_lemma2(8, 2, 0.9, t02, 200);
  CHECK(even.premise);
  CHECK(even.premise_rhs == doctest::Approx((0.1 / 0.9) * 0.2));
  CHECK_FALSE(even.conclusion);
  CHECK(even.discrepancy);
  REQUIRE(even.counterexample.has_value());
  CHECK(even.counterexample->actor_count() < 8);

  const std::vector<double> t07(7, 0.2);
  const auto odd = verify_lemma2(7, 2, 0.9, t07, 200);
  CHECK(odd.premise);
  CHECK(odd.conclusion);
  CHECK_FALSE(odd.discrepancy);
  REQUIRE(odd.sync_tick.has_value());
  CHECK(*odd.sync_tick == 6);
}

TEST_CASE("lemma2 vacuous when the premise fails") {
  const std::vector<double> t0(8, 0.9);
  const auto cert = verify_lemma2(8, 2, 0.1, t0, 100);
  CHECK_FALSE(cert.premise);
  CHECK_FALSE(cert.discrepancy);
}

TEST_CASE("lemma2 across k=4 lattices") {
  Rng rng(13);
  for (int n : {8, 10, 12}) {
    for (int draw = 0; draw < 5; ++draw) {
      std::vector<double> t0(n);
      for (double& t : t0) t = rng.uniform(0.0, 0.3);
      const auto cert = verify_lemma2(n, 4, 0.8, t0, 200);
      CHECK(cert.premise);
      CHECK(cert.conclusion);
    }
  }
}

TEST_CASE("theorem1 vacuous at low degree") {
  const std::vector<double> t0(6, 0.2);
  const auto cert = verify_theorem1(6, 2, GameParams{0.1, 0.15, 0.2, 0.9}, t0, 100);
  CHECK_FALSE(cert.premise_degree);
  CHECK_FALSE(cert.premise);
  CHECK_FALSE(cert.discrepancy);
}

// The two odds premises need raw willingness above k/(k+1) for both types at
// once, but the raw pair always carries opposite signs; the scan documents
// the empty premise set rather than asserting anything stronger.
TEST_CASE("theorem1 premise set is empty over the scanned grid") {
  const auto report = run_theorem1_grid(6, 4, 50, 5);
  CHECK(report.points > 500);
  CHECK(report.premise_true == 0);
  CHECK(report.discrepancies == 0);
}

TEST_CASE("theorem2 peak versus trough activation") {
  const auto peak_setup = make_cycle_setup(16.0, true, 3);
  const auto peak = verify_theorem2(peak_setup.driver, peak_setup.schedule, peak_setup.graph,
                                    peak_setup.config, peak_setup.horizon);
  CHECK(peak.complete_waves >= 2);
  CHECK(peak.coordination_dev == doctest::Approx(0.0).epsilon(1e-9));

  const auto trough_setup = make_cycle_setup(16.0, false, 3);
  const auto trough = verify_theorem2(trough_setup.driver, trough_setup.schedule,
                                      trough_setup.graph, trough_setup.config,
                                      trough_setup.horizon);
  CHECK(trough.mean_peak_pro < peak.mean_peak_pro);
  CHECK(trough.coordination_dev == doctest::Approx(8.0).epsilon(1e-6));
}

TEST_CASE("theorem2 rejects aperiodic drivers and empty schedules") {
  const auto setup = make_cycle_setup(16.0, true, 1);
  CHECK_THROWS_AS(verify_theorem2(CycleDriver::constant(0.5), setup.schedule, setup.graph,
                                  setup.config, setup.horizon),
                  ValidationError);
  CHECK_THROWS_AS(verify_theorem2(setup.driver, {}, setup.graph, setup.config, setup.horizon),
                  EmptySchedule);
}

TEST_CASE("certificates serialize to JSON with their key fields") {
  const std::vector<double> t0(8, 0.2);
  const auto cert = verify_lemma2(8, 2, 0.9, t0, 50);
  const std::string json = to_json(cert);
  CHECK(json.find("\"premise\"") != std::string::npos);
  CHECK(json.find("\"conclusion\"") != std::string::npos);
  CHECK(json.find("\"counterexample\"") != std::string::npos);
  const auto setup = make_cycle_setup(16.0, true, 1);
  const auto t2 = verify_theorem2(setup.driver, setup.schedule, setup.graph, setup.config,
                                  setup.horizon);
  CHECK(to_json(t2).find("\"complete_waves\"") != std::string::npos);
}
