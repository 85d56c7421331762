#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "synchrony/errors.hpp"

namespace synchrony {

// Exogenous willingness waveform f(t) in [0, 1].
//   constant:  f = value
//   sinusoid:  f(t) = 0.5 * sin(m*t + n) + 0.5   (m = angular step per tick)
//   piecewise: f(t) = table[t mod table.size()]
// Optional per-agent (m_i, n_i) overrides; without them every agent sees the
// same waveform.
struct CycleDriver {
  enum class Kind { Constant, Sinusoid, Piecewise };

  Kind kind = Kind::Constant;
  double value = 0.5;  // constant level
  double m = 0.0;      // sinusoid angular step
  double n = 0.0;      // sinusoid phase offset
  std::vector<double> table;

  struct PerAgent {
    std::vector<double> m;
    std::vector<double> n;
  };
  std::optional<PerAgent> per_agent;

  // Nominal period in ticks for mod-period bookkeeping; defaults to 2*pi/m
  // for sinusoids, table size for piecewise tables, 0 for constants.
  double period_T = 0.0;

  static CycleDriver constant(double c);
  static CycleDriver sinusoid(double m, double n);
  static CycleDriver sinusoid_with_period(double period_ticks, double phase);
  static CycleDriver piecewise(std::vector<double> table);

  double period() const;
  void validate() const;
};

// Exact waveform value for one agent at one tick.
double evaluate(const CycleDriver& driver, int agent, int t);

// Forced-activation events: at each listed tick the listed nodes have their
// action bit set to 1 for that tick.
struct ActivationSchedule {
  std::vector<std::pair<int, std::vector<int>>> events;  // sorted by tick

  bool empty() const { return events.empty(); }
  void add(int tick, int node);
  const std::vector<int>* at(int tick) const;
  void validate(int n_nodes) const;

  // CSV rows "tick,node"; '#' comments and a "tick,node" header are allowed.
  static ActivationSchedule from_csv(const std::string& text,
                                     const std::string& origin = "<string>");
  static ActivationSchedule load_csv(const std::string& path);
};

// Mean, over activation events, of the distance in ticks from the event to
// the nearest peak of f. Zero when every activation lands exactly on a peak;
// defined as 0 for constant drivers (every tick is a peak).
double coordination_deviation(const CycleDriver& driver, const ActivationSchedule& schedule);

}  // namespace synchrony
