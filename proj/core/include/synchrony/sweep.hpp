#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "synchrony/analysis.hpp"
#include "synchrony/dynamics.hpp"

namespace synchrony {

// One sweep axis: a model parameter name and the values it takes.
// Known axes: alpha, beta, x, y, active_fraction, d, period_T, n,
// threshold_hi (upper bound of a uniform(0, v) threshold law).
struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

struct SweepSpec {
  std::vector<SweepAxis> axes;
  int replicates = 1;
  int horizon = 100;

  // Base point the axes perturb.
  GameParams game{0.1, 0.15, 0.2, 0.9};
  double active_fraction = 1.0;
  NetworkSpec network{50, 4, 0.3, 0};
  ThresholdInit threshold_init = ThresholdUniform{0.0, 0.5};
  InitialActors initial_actors = InitialActorCount{1};
  AffineLinkage linkage;
  CycleDriver driver = CycleDriver::constant(0.5);
  ActivationSchedule schedule;
  std::uint64_t seed = 0;

  void validate() const;
  static const std::vector<std::string>& known_axes();
};

struct SweepRow {
  std::vector<double> cell;  // one value per axis, axis order
  int replicate = 0;
  std::uint64_t seed = 0;
  bool error = false;
  std::string error_message;
  bool synced = false;
  std::optional<int> sync_tick;
  double final_pro = 0.0;
  int wave_count = 0;
  std::optional<double> mean_period;
  // Pro(t) trace retained for plotting grouped line charts.
  std::vector<double> pro_trace;
};

struct SweepResult {
  std::vector<std::string> axis_names;
  std::vector<SweepRow> rows;  // |axes product| * replicates, cell-major order
  int horizon = 0;
};

// Executes every cell x replicate, parallelized over a worker pool but with
// output ordering fixed by (cell index, replicate). Per-cell seeds are
// derived by hashing (base seed, cell index, replicate), so results do not
// depend on scheduling. Per-cell failures (e.g. degenerate beliefs) are
// recorded in the row and the sweep continues.
SweepResult run_sweep(const SweepSpec& spec, int threads = 0);

struct AxisAggregate {
  double value = 0.0;
  int runs = 0;
  double sync_rate = 0.0;
  // Sync tick censored at the horizon for runs that never synchronized.
  double mean_sync_tick = 0.0;
  double stddev_sync_tick = 0.0;
  double mean_final_pro = 0.0;
};

// Per-value aggregates along one axis. Throws UnknownAxis.
std::vector<AxisAggregate> summarize(const SweepSpec& spec, const SweepResult& result,
                                     const std::string& group_by);

std::string sweep_to_csv(const SweepResult& result);
std::string summary_to_csv(const std::vector<AxisAggregate>& aggregates,
                           const std::string& axis_name);

}  // namespace synchrony
