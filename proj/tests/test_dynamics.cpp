#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "synchrony/dynamics.hpp"
#include "synchrony/rng.hpp"

using namespace synchrony;

namespace {

// Independent straight-line reimplementation of one synchronous tick, kept
// deliberately naive: build every field from scratch off the old state.
SystemState oracle_step(const SystemState& s, const Graph& g, double p_active,
                        double p_inactive, double f, const AffineLinkage& link) {
  SystemState out;
  out.t = s.t + 1;
  out.types = s.types;
  out.thresholds.assign(g.n, 0.0);
  out.perceptions.assign(g.n, 0.0);
  out.actions.assign(g.n, 0);
  for (int i = 0; i < g.n; ++i) {
    double sum_t = 0.0;
    double sum_a = 0.0;
    for (int j : g.adj[i]) {
      sum_t += s.thresholds[j];
      sum_a += s.actions[j];
    }
    out.thresholds[i] = sum_t / g.adj[i].size();
    out.perceptions[i] = sum_a / g.adj[i].size();
  }
  for (int i = 0; i < g.n; ++i) {
    const double p = s.types[i] == AgentType::Active ? p_active : p_inactive;
    const double lhs = f * p * (link.a_p + link.b_p * out.perceptions[i]);
    const double rhs = (1.0 - f) * (1.0 - p) * (link.a_T + link.b_T * out.thresholds[i]);
    out.actions[i] = lhs > rhs ? 1 : 0;
  }
  return out;
}

SystemState make_state(const Graph& g, std::vector<double> thresholds,
                       std::vector<std::uint8_t> actions) {
  SystemState s;
  s.t = 0;
  s.types.assign(g.n, AgentType::Active);
  s.thresholds = std::move(thresholds);
  s.actions = std::move(actions);
  s.perceptions.assign(g.n, 0.0);
  return s;
}

EquilibriumProbs probs_of(double pa, double pi) {
  EquilibriumProbs eq;
  eq.p_act_active = eq.raw_active = pa;
  eq.p_act_inactive = eq.raw_inactive = pi;
  return eq;
}

}  // namespace

TEST_CASE("init_state on C6 with everything pinned") {
  const Graph g = make_regular_ring(6, 2);
  SimConfig cfg;
  cfg.willingness = {0.9, 0.9};
  cfg.active_fraction = 1.0;
  cfg.threshold_init = ThresholdConstant{0.2};
  cfg.initial_actors = std::vector<int>{0};
  const SystemState s = init_state(g, cfg);
  CHECK(s.t == 0);
  for (auto ty : s.types) CHECK(ty == AgentType::Active);
  for (double t : s.thresholds) CHECK(t == 0.2);
  CHECK(s.actions == std::vector<std::uint8_t>{1, 0, 0, 0, 0, 0});
  for (double p : s.perceptions) CHECK(p == 0.0);
}

TEST_CASE("init_state reproducibility and actor count") {
  const Graph g = make_small_world({50, 4, 0.3, 1});
  SimConfig cfg;
  cfg.game = GameParams{0.7, 0.3, 0.8, 0.9};
  cfg.active_fraction = 0.4;
  cfg.threshold_init = ThresholdUniform{0.0, 0.5};
  cfg.initial_actors = InitialActorCount{1};
  cfg.seed = 2;
  const SystemState a = init_state(g, cfg);
  const SystemState b = init_state(g, cfg);
  CHECK(a.types == b.types);
  CHECK(a.thresholds == b.thresholds);
  CHECK(a.actions == b.actions);
  CHECK(a.actor_count() == 1);
}

TEST_CASE("init_state shape errors") {
  const Graph g = make_regular_ring(6, 2);
  SimConfig cfg;
  cfg.willingness = {0.5, 0.5};
  cfg.threshold_init = std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5};  // length 5 != 6
  CHECK_THROWS_AS(init_state(g, cfg), BadInitialActors);
  cfg.threshold_init = ThresholdConstant{0.2};
  cfg.initial_actors = std::vector<int>{6};
  CHECK_THROWS_AS(init_state(g, cfg), BadInitialActors);
  cfg.initial_actors = InitialActorCount{7};
  CHECK_THROWS_AS(init_state(g, cfg), BadInitialActors);
}

TEST_CASE("hand-executed tick on C6") {
  const Graph g = make_regular_ring(6, 2);
  SystemState s = make_state(g, std::vector<double>(6, 0.2), {1, 0, 0, 0, 0, 0});
  const auto eq = probs_of(0.9, 0.9);
  const SystemState next = step(s, g, eq, 0.5, {}, AffineLinkage::identity());
  // Node 1 sees P = 1/2 and acts: 0.9 * 0.5 > 0.1 * 0.2. Node 3 sees P = 0.
  CHECK(next.perceptions[1] == doctest::Approx(0.5));
  CHECK(next.actions[1] == 1);
  CHECK(next.perceptions[3] == 0.0);
  CHECK(next.actions[3] == 0);
  CHECK(next.actions[5] == 1);
  // Cross-check every field against the straight-line oracle.
  const SystemState expect = oracle_step(s, g, 0.9, 0.9, 0.5, AffineLinkage::identity());
  CHECK(next.actions == expect.actions);
  CHECK(next.thresholds == expect.thresholds);
  CHECK(next.perceptions == expect.perceptions);
}

TEST_CASE("step agrees with the oracle on random systems") {
  Rng rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 10 + rng.below(30);
    const Graph g = make_small_world({n, 4, 0.3, rng.raw()});
    std::vector<double> t0(n);
    std::vector<std::uint8_t> a0(n);
    for (int i = 0; i < n; ++i) {
      t0[i] = rng.uniform01();
      a0[i] = rng.bernoulli(0.3) ? 1 : 0;
    }
    SystemState s = make_state(g, t0, a0);
    for (int i = 0; i < n; ++i)
      s.types[i] = rng.bernoulli(0.5) ? AgentType::Active : AgentType::NonActive;
    const double pa = rng.uniform01(), pi = rng.uniform01(), f = rng.uniform01();
    const AffineLinkage link{rng.uniform01(), rng.uniform01(), rng.uniform01(), rng.uniform01()};
    const auto eq = probs_of(pa, pi);
    const SystemState got = step(s, g, eq, f, {}, link);
    const SystemState expect = oracle_step(s, g, pa, pi, f, link);
    CHECK(got.actions == expect.actions);
    CHECK(got.thresholds == expect.thresholds);
    CHECK(got.perceptions == expect.perceptions);
  }
}

TEST_CASE("zero driver value kills all actions") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 8 + rng.below(20);
    const Graph g = make_small_world({n, 4, 0.2, rng.raw()});
    std::vector<double> t0(n);
    std::vector<std::uint8_t> a0(n);
    for (int i = 0; i < n; ++i) {
      t0[i] = rng.uniform01();
      a0[i] = rng.bernoulli(0.6) ? 1 : 0;
    }
    const SystemState s = make_state(g, t0, a0);
    const SystemState next = step(s, g, probs_of(0.95, 0.9), 0.0, {}, AffineLinkage::identity());
    CHECK(next.actor_count() == 0);
  }
}

TEST_CASE("forced agents act regardless and keep averaging thresholds") {
  const Graph g = make_regular_ring(6, 2);
  const SystemState s = make_state(g, {0.0, 0.3, 0.6, 0.9, 0.6, 0.3}, {0, 0, 0, 0, 0, 0});
  const SystemState next = step(s, g, probs_of(0.5, 0.5), 0.5, {4}, AffineLinkage::identity());
  CHECK(next.actions[4] == 1);
  CHECK(next.actor_count() == 1);
  CHECK(next.thresholds[4] == doctest::Approx((0.9 + 0.3) / 2.0));
}

TEST_CASE("bipartite averaging swaps, overlapping neighborhoods contract") {
  // C4 with alternating thresholds: each node averages its two equal-valued
  // neighbors, so the pattern flips and the spread never shrinks.
  const Graph c4 = make_regular_ring(4, 2);
  const SystemState s4 = make_state(c4, {0.0, 1.0, 0.0, 1.0}, {0, 0, 0, 0});
  const SystemState n4 = step(s4, c4, probs_of(0.5, 0.5), 0.5, {}, AffineLinkage::identity());
  CHECK(n4.thresholds == std::vector<double>{1.0, 0.0, 1.0, 0.0});

  // K5: spread 1 contracts to 1/4 <= (1 - 1/4) * 1 in one tick.
  const Graph k5 = make_regular_ring(5, 4);
  const SystemState s5 = make_state(k5, {0.0, 1.0, 0.0, 0.0, 0.0}, {0, 0, 0, 0, 0});
  const SystemState n5 = step(s5, k5, probs_of(0.5, 0.5), 0.5, {}, AffineLinkage::identity());
  CHECK(n5.thresholds[0] == doctest::Approx(0.25));
  CHECK(n5.thresholds[1] == doctest::Approx(0.0));
  const auto [lo, hi] = std::minmax_element(n5.thresholds.begin(), n5.thresholds.end());
  CHECK(*hi - *lo <= doctest::Approx(0.75 * 1.0));
  CHECK(*hi - *lo == doctest::Approx(0.25));
}

TEST_CASE("threshold envelope is monotone and perceptions are neighbor counts") {
  Rng rng(909);
  const Graph g = make_small_world({40, 6, 0.3, 11});
  SimConfig cfg;
  cfg.willingness = {0.8, 0.2};
  cfg.active_fraction = 0.5;
  cfg.threshold_init = ThresholdUniform{0.0, 1.0};
  cfg.initial_actors = InitialActorCount{3};
  cfg.seed = 5;
  const Trajectory traj = run(g, cfg, CycleDriver::sinusoid_with_period(12, 1.0), 60);
  for (std::size_t t = 1; t < traj.states.size(); ++t) {
    const auto& prev = traj.states[t - 1].thresholds;
    const auto& cur = traj.states[t].thresholds;
    const double prev_min = *std::min_element(prev.begin(), prev.end());
    const double prev_max = *std::max_element(prev.begin(), prev.end());
    const double cur_min = *std::min_element(cur.begin(), cur.end());
    const double cur_max = *std::max_element(cur.begin(), cur.end());
    CHECK(cur_min >= prev_min - 1e-12);
    CHECK(cur_max <= prev_max + 1e-12);
    for (int i = 0; i < g.n; ++i) {
      const double count = traj.states[t].perceptions[i] * g.degree(i);
      CHECK(count == doctest::Approx(std::round(count)).epsilon(1e-9));
      CHECK(traj.states[t].perceptions[i] >= 0.0);
      CHECK(traj.states[t].perceptions[i] <= 1.0);
    }
  }
  (void)rng;
}

TEST_CASE("f=1/2 with identity linkage matches the unscaled comparison bitwise") {
  const Graph g = make_small_world({30, 4, 0.3, 17});
  SimConfig cfg;
  cfg.willingness = {0.7, 0.4};
  cfg.active_fraction = 0.5;
  cfg.threshold_init = ThresholdUniform{0.0, 0.6};
  cfg.initial_actors = InitialActorCount{2};
  cfg.seed = 21;
  const Trajectory traj = run(g, cfg, CycleDriver::constant(0.5), 40);

  // Unscaled baseline: p * P > (1 - p) * T, stepped independently.
  SystemState s = traj.states.front();
  for (std::size_t t = 1; t < traj.states.size(); ++t) {
    SystemState next;
    next.t = s.t + 1;
    next.types = s.types;
    next.thresholds.assign(g.n, 0.0);
    next.perceptions.assign(g.n, 0.0);
    next.actions.assign(g.n, 0);
    for (int i = 0; i < g.n; ++i) {
      double sum_t = 0.0, sum_a = 0.0;
      for (int j : g.adj[i]) {
        sum_t += s.thresholds[j];
        sum_a += s.actions[j];
      }
      next.thresholds[i] = sum_t / g.adj[i].size();
      next.perceptions[i] = sum_a / g.adj[i].size();
    }
    for (int i = 0; i < g.n; ++i) {
      const double p = s.types[i] == AgentType::Active ? 0.7 : 0.4;
      next.actions[i] = (p * next.perceptions[i] > (1.0 - p) * next.thresholds[i]) ? 1 : 0;
    }
    CHECK(next.actions == traj.states[t].actions);
    s = next;
  }
}

TEST_CASE("no spontaneous generation without seeds or offsets") {
  const Graph g = make_small_world({40, 4, 0.3, 23});
  SimConfig cfg;
  cfg.game = GameParams{0.5, 0.5, 0.2, 0.9};
  cfg.initial_actors = InitialActorCount{0};
  const Trajectory traj = run(g, cfg, CycleDriver::sinusoid_with_period(10, 0.3), 50);
  for (double pro : traj.pro) CHECK(pro == 0.0);
}

TEST_CASE("reference diffusion configuration: mid degree beats low degree") {
  // alpha=0.7, beta=0.3, x=0.8, y=0.9, active fraction 0.6. The non-active
  // type's clamped willingness is zero here, so full participation is out of
  // reach; what the degree buys is coverage of the active subpopulation.
  auto final_pro = [](int d) {
    double total = 0.0;
    for (int seed = 0; seed < 5; ++seed) {
      const Graph g = make_small_world({50, d, 0.3, derive_seed(77, seed)});
      SimConfig cfg;
      cfg.game = GameParams{0.7, 0.3, 0.8, 0.9};
      cfg.active_fraction = 0.6;
      cfg.threshold_init = ThresholdUniform{0.0, 0.5};
      cfg.initial_actors = InitialActorCount{1};
      cfg.seed = derive_seed(78, seed);
      const Trajectory traj = run(g, cfg, CycleDriver::constant(0.5), 50, {}, false);
      total += traj.pro.back();
    }
    return total / 5.0;
  };
  const double low = final_pro(2);
  const double mid = final_pro(5);
  CHECK(mid > low);
  CHECK(low < 0.2);   // stalls almost immediately on near-chains
  CHECK(mid > 0.35);  // reaches most of the active subpopulation
  CHECK(mid < 1.0);
}

TEST_CASE("trajectories are deterministic in the full configuration") {
  const Graph g = make_small_world({35, 4, 0.3, 3});
  SimConfig cfg;
  cfg.game = GameParams{0.2, 0.3, 0.3, 0.8};
  cfg.active_fraction = 0.7;
  cfg.seed = 99;
  ActivationSchedule schedule;
  schedule.add(0, 2);
  schedule.add(12, 5);
  const auto d = CycleDriver::sinusoid_with_period(12, 1.5707963267948966);
  const Trajectory a = run(g, cfg, d, 60, schedule);
  const Trajectory b = run(g, cfg, d, 60, schedule);
  CHECK(a.pro == b.pro);
  CHECK(a.total_deviation == b.total_deviation);
  for (std::size_t t = 0; t < a.states.size(); ++t)
    CHECK(a.states[t].actions == b.states[t].actions);
}

TEST_CASE("schedule events land on their own ticks") {
  const Graph g = make_regular_ring(8, 2);
  SimConfig cfg;
  cfg.willingness = {0.0, 0.0};  // nobody acts endogenously
  cfg.threshold_init = ThresholdConstant{0.5};
  cfg.initial_actors = InitialActorCount{0};
  ActivationSchedule schedule;
  schedule.add(0, 3);
  schedule.add(4, 6);
  const Trajectory traj = run(g, cfg, CycleDriver::constant(0.5), 8, schedule);
  CHECK(traj.states[0].actions[3] == 1);
  CHECK(traj.actor_counts[0] == 1);
  CHECK(traj.actor_counts[1] == 0);
  CHECK(traj.states[4].actions[6] == 1);
  CHECK(traj.actor_counts[4] == 1);
  CHECK(traj.actor_counts[5] == 0);
}

TEST_CASE("per-agent driver phases desynchronize the population") {
  const Graph g = make_regular_ring(10, 2);
  SimConfig cfg;
  cfg.willingness = {0.9, 0.9};
  cfg.threshold_init = ThresholdConstant{0.1};
  cfg.initial_actors = std::vector<int>{0, 5};
  auto driver = CycleDriver::sinusoid_with_period(8, 0.0);
  CycleDriver::PerAgent pa;
  // Half the agents sit half a period out of phase.
  for (int i = 0; i < 10; ++i) {
    pa.m.push_back(driver.m);
    pa.n.push_back(i < 5 ? 1.5707963267948966 : -1.5707963267948966);
  }
  driver.per_agent = pa;
  const Trajectory het = run(g, cfg, driver, 24);
  auto homogeneous = CycleDriver::sinusoid_with_period(8, 1.5707963267948966);
  const Trajectory hom = run(g, cfg, homogeneous, 24);
  CHECK(het.pro != hom.pro);
  // At t=0 the second group's f is 0, so none of them act at t=1.
  for (int i = 5; i < 10; ++i) CHECK(het.states[1].actions[i] == 0);
}

TEST_CASE("closed-neighborhood averaging includes the agent itself") {
  const Graph k5 = make_regular_ring(5, 4);
  const SystemState s = make_state(k5, {0.0, 1.0, 0.0, 0.0, 0.0}, {0, 0, 0, 0, 0});
  const SystemState closed =
      step(s, k5, probs_of(0.5, 0.5), 0.5, {}, AffineLinkage::identity(), true);
  CHECK(closed.thresholds[0] == doctest::Approx(1.0 / 5.0));
  CHECK(closed.thresholds[1] == doctest::Approx(1.0 / 5.0));
  // Open averaging from the same state excludes self.
  const SystemState open =
      step(s, k5, probs_of(0.5, 0.5), 0.5, {}, AffineLinkage::identity(), false);
  CHECK(open.thresholds[1] == doctest::Approx(0.0));
}

TEST_CASE("run propagates degenerate beliefs") {
  const Graph g = make_regular_ring(8, 2);
  SimConfig cfg;
  cfg.game = GameParams{0.5, 0.5, 0.4, 0.4};
  CHECK_THROWS_AS(run(g, cfg, CycleDriver::constant(0.5), 10), DegenerateBeliefs);
}

TEST_CASE("csv exports carry the expected headers and shapes") {
  const Graph g = make_regular_ring(6, 2);
  SimConfig cfg;
  cfg.willingness = {0.9, 0.9};
  cfg.threshold_init = ThresholdConstant{0.2};
  cfg.initial_actors = std::vector<int>{0};
  const Trajectory traj = run(g, cfg, CycleDriver::constant(0.5), 3);
  const std::string tcsv = trajectory_to_csv(traj);
  CHECK(tcsv.rfind("t,agent,type,action,threshold,perception\n", 0) == 0);
  CHECK(std::count(tcsv.begin(), tcsv.end(), '\n') == 1 + 4 * 6);
  const std::string scsv = summary_to_csv(traj);
  CHECK(scsv.rfind("t,pro,total_deviation\n", 0) == 0);
  CHECK(std::count(scsv.begin(), scsv.end(), '\n') == 1 + 4);
}
