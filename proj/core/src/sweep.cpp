#include "synchrony/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "synchrony/csv.hpp"
#include "synchrony/pool.hpp"
#include "synchrony/rng.hpp"

namespace synchrony {

const std::vector<std::string>& SweepSpec::known_axes() {
  static const std::vector<std::string> names = {
      "alpha", "beta", "x", "y", "active_fraction", "d", "period_T", "n", "threshold_hi"};
  return names;
}

void SweepSpec::validate() const {
  if (axes.empty()) throw ValidationError("sweep: at least one axis is required");
  if (replicates < 1) throw ValidationError("sweep: replicates must be >= 1");
  if (horizon < 1) throw ValidationError("sweep: horizon must be >= 1");
  const auto& known = known_axes();
  for (const auto& axis : axes) {
    if (std::find(known.begin(), known.end(), axis.name) == known.end())
      throw UnknownAxis("sweep: unknown axis '" + axis.name + "'");
    if (axis.values.empty())
      throw ValidationError("sweep: axis '" + axis.name + "' has no values");
  }
}

namespace {

struct Cell {
  std::vector<double> values;  // one per axis
};

std::vector<Cell> cartesian(const std::vector<SweepAxis>& axes) {
  std::vector<Cell> cells{{}};
  for (const auto& axis : axes) {
    std::vector<Cell> expanded;
    expanded.reserve(cells.size() * axis.values.size());
    for (const auto& cell : cells) {
      for (double v : axis.values) {
        Cell c = cell;
        c.values.push_back(v);
        expanded.push_back(std::move(c));
      }
    }
    cells = std::move(expanded);
  }
  return cells;
}

void apply_axis(const std::string& name, double value, SweepSpec& spec) {
  if (name == "alpha") {
    spec.game.alpha = value;
  } else if (name == "beta") {
    spec.game.beta = value;
  } else if (name == "x") {
    spec.game.x = value;
  } else if (name == "y") {
    spec.game.y = value;
  } else if (name == "active_fraction") {
    spec.active_fraction = value;
  } else if (name == "d") {
    spec.network.d = static_cast<int>(value);
  } else if (name == "n") {
    spec.network.n = static_cast<int>(value);
  } else if (name == "period_T") {
    spec.driver = CycleDriver::sinusoid_with_period(value, spec.driver.n);
  } else if (name == "threshold_hi") {
    spec.threshold_init = ThresholdUniform{0.0, value};
  } else {
    throw UnknownAxis("sweep: unknown axis '" + name + "'");
  }
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, int threads) {
  spec.validate();
  const std::vector<Cell> cells = cartesian(spec.axes);
  const int total = static_cast<int>(cells.size()) * spec.replicates;

  SweepResult result;
  result.horizon = spec.horizon;
  for (const auto& axis : spec.axes) result.axis_names.push_back(axis.name);
  result.rows.resize(total);

  run_indexed_jobs(total, threads, [&](int idx) {
    const int cell_idx = idx / spec.replicates;
    const int rep = idx % spec.replicates;
    const Cell& cell = cells[cell_idx];

    SweepRow row;
    row.cell = cell.values;
    row.replicate = rep;
    row.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(cell_idx),
                           static_cast<std::uint64_t>(rep));
    try {
      SweepSpec local = spec;
      for (std::size_t a = 0; a < cell.values.size(); ++a)
        apply_axis(spec.axes[a].name, cell.values[a], local);

      NetworkSpec net = local.network;
      net.seed = derive_seed(row.seed, 0xA11CEu);
      const Graph graph = make_small_world(net);

      SimConfig config;
      config.game = local.game;
      config.active_fraction = local.active_fraction;
      config.threshold_init = local.threshold_init;
      config.initial_actors = local.initial_actors;
      config.linkage = local.linkage;
      config.seed = derive_seed(row.seed, 0x57A7Eu);

      const Trajectory traj =
          run(graph, config, local.driver, local.horizon, local.schedule, false);
      const SyncReport sync = detect_sync(traj);
      const CycleReport cycles = stage_decompose(traj);

      row.synced = sync.action_sync_tick.has_value();
      row.sync_tick = sync.action_sync_tick;
      row.final_pro = traj.pro.back();
      row.wave_count = cycles.wave_count;
      row.mean_period = cycles.mean_period;
      row.pro_trace = traj.pro;
    } catch (const Error& e) {
      row.error = true;
      row.error_message = e.what();
    }
    result.rows[idx] = std::move(row);
  });
  return result;
}

std::vector<AxisAggregate> summarize(const SweepSpec& spec, const SweepResult& result,
                                     const std::string& group_by) {
  const auto it = std::find(result.axis_names.begin(), result.axis_names.end(), group_by);
  if (it == result.axis_names.end())
    throw UnknownAxis("summarize: unknown axis '" + group_by + "'");
  const std::size_t axis_idx = static_cast<std::size_t>(it - result.axis_names.begin());

  std::vector<double> order;
  std::map<double, std::vector<const SweepRow*>> groups;
  for (const auto& row : result.rows) {
    if (row.error) continue;
    const double key = row.cell[axis_idx];
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&row);
  }
  std::sort(order.begin(), order.end());

  std::vector<AxisAggregate> aggregates;
  for (double key : order) {
    const auto& rows = groups[key];
    AxisAggregate agg;
    agg.value = key;
    agg.runs = static_cast<int>(rows.size());
    double tick_sum = 0.0, tick_sq = 0.0, pro_sum = 0.0;
    int synced = 0;
    for (const SweepRow* row : rows) {
      const double tick = row->synced ? static_cast<double>(*row->sync_tick)
                                      : static_cast<double>(result.horizon);
      tick_sum += tick;
      tick_sq += tick * tick;
      pro_sum += row->final_pro;
      synced += row->synced ? 1 : 0;
    }
    const double n = static_cast<double>(rows.size());
    agg.sync_rate = synced / n;
    agg.mean_sync_tick = tick_sum / n;
    const double var = std::max(0.0, tick_sq / n - agg.mean_sync_tick * agg.mean_sync_tick);
    agg.stddev_sync_tick = std::sqrt(var);
    agg.mean_final_pro = pro_sum / n;
    aggregates.push_back(agg);
  }
  (void)spec;
  return aggregates;
}

std::string sweep_to_csv(const SweepResult& result) {
  std::ostringstream out;
  for (const auto& name : result.axis_names) out << name << ',';
  out << "replicate,seed,error,synced,sync_tick,final_pro,wave_count,mean_period\n";
  for (const auto& row : result.rows) {
    for (double v : row.cell) out << csv::num(v) << ',';
    out << row.replicate << ',' << row.seed << ',' << (row.error ? 1 : 0) << ','
        << (row.synced ? 1 : 0) << ',';
    if (row.sync_tick) out << *row.sync_tick;
    out << ',' << csv::num(row.final_pro) << ',' << row.wave_count << ',';
    if (row.mean_period) out << csv::num(*row.mean_period);
    out << '\n';
  }
  return out.str();
}

std::string summary_to_csv(const std::vector<AxisAggregate>& aggregates,
                           const std::string& axis_name) {
  std::ostringstream out;
  out << axis_name << ",runs,sync_rate,mean_sync_tick,stddev_sync_tick,mean_final_pro\n";
  for (const auto& agg : aggregates) {
    out << csv::num(agg.value) << ',' << agg.runs << ',' << csv::num(agg.sync_rate) << ','
        << csv::num(agg.mean_sync_tick) << ',' << csv::num(agg.stddev_sync_tick) << ','
        << csv::num(agg.mean_final_pro) << '\n';
  }
  return out.str();
}

}  // namespace synchrony
