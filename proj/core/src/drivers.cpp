#include "synchrony/drivers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace synchrony {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

CycleDriver CycleDriver::constant(double c) {
  CycleDriver d;
  d.kind = Kind::Constant;
  d.value = c;
  d.validate();
  return d;
}

CycleDriver CycleDriver::sinusoid(double m, double n) {
  CycleDriver d;
  d.kind = Kind::Sinusoid;
  d.m = m;
  d.n = n;
  d.period_T = (m != 0.0) ? 2.0 * kPi / std::abs(m) : 0.0;
  d.validate();
  return d;
}

CycleDriver CycleDriver::sinusoid_with_period(double period_ticks, double phase) {
  if (period_ticks <= 0) throw ValidationError("driver: period must be > 0");
  CycleDriver d = sinusoid(2.0 * kPi / period_ticks, phase);
  d.period_T = period_ticks;
  return d;
}

CycleDriver CycleDriver::piecewise(std::vector<double> table) {
  CycleDriver d;
  d.kind = Kind::Piecewise;
  d.table = std::move(table);
  d.period_T = static_cast<double>(d.table.size());
  d.validate();
  return d;
}

double CycleDriver::period() const { return period_T; }

void CycleDriver::validate() const {
  switch (kind) {
    case Kind::Constant:
      if (value < 0.0 || value > 1.0)
        throw ValidationError("driver: constant level must lie in [0, 1]");
      break;
    case Kind::Sinusoid:
      break;  // 0.5*sin+0.5 is in [0,1] for any m, n
    case Kind::Piecewise:
      if (table.empty()) throw ValidationError("driver: piecewise table is empty");
      for (double v : table)
        if (v < 0.0 || v > 1.0)
          throw ValidationError("driver: piecewise values must lie in [0, 1]");
      break;
  }
  if (per_agent) {
    if (kind != Kind::Sinusoid)
      throw ValidationError("driver: per-agent overrides require a sinusoid");
    if (per_agent->m.size() != per_agent->n.size())
      throw ValidationError("driver: per-agent m and n lengths differ");
  }
}

double evaluate(const CycleDriver& driver, int agent, int t) {
  if (t < 0) throw ValidationError("driver: t must be >= 0");
  switch (driver.kind) {
    case CycleDriver::Kind::Constant:
      return driver.value;
    case CycleDriver::Kind::Sinusoid: {
      double m = driver.m, n = driver.n;
      if (driver.per_agent && agent >= 0 &&
          agent < static_cast<int>(driver.per_agent->m.size())) {
        m = driver.per_agent->m[agent];
        n = driver.per_agent->n[agent];
      }
      return 0.5 * std::sin(m * t + n) + 0.5;
    }
    case CycleDriver::Kind::Piecewise:
      return driver.table[static_cast<std::size_t>(t) % driver.table.size()];
  }
  return 0.0;
}

void ActivationSchedule::add(int tick, int node) {
  if (tick < 0) throw ValidationError("schedule: tick must be >= 0");
  auto it = std::lower_bound(events.begin(), events.end(), tick,
                             [](const auto& e, int t) { return e.first < t; });
  if (it != events.end() && it->first == tick) {
    if (std::find(it->second.begin(), it->second.end(), node) == it->second.end())
      it->second.push_back(node);
  } else {
    events.insert(it, {tick, {node}});
  }
}

const std::vector<int>* ActivationSchedule::at(int tick) const {
  auto it = std::lower_bound(events.begin(), events.end(), tick,
                             [](const auto& e, int t) { return e.first < t; });
  if (it != events.end() && it->first == tick) return &it->second;
  return nullptr;
}

void ActivationSchedule::validate(int n_nodes) const {
  for (const auto& [tick, nodes] : events) {
    if (tick < 0) throw ValidationError("schedule: tick must be >= 0");
    for (int node : nodes)
      if (node < 0 || node >= n_nodes)
        throw BadInitialActors("schedule: node " + std::to_string(node) +
                               " out of range for n=" + std::to_string(n_nodes));
  }
}

ActivationSchedule ActivationSchedule::from_csv(const std::string& text,
                                                const std::string& origin) {
  ActivationSchedule s;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line_no == 1 && line.find("tick") != std::string::npos) continue;  // header
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    long long tick, node;
    if (!(ls >> tick >> node))
      throw ParseError(origin + ":" + std::to_string(line_no) + ": expected 'tick,node'");
    if (tick < 0 || node < 0)
      throw ParseError(origin + ":" + std::to_string(line_no) + ": negative value");
    s.add(static_cast<int>(tick), static_cast<int>(node));
  }
  return s;
}

ActivationSchedule ActivationSchedule::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_csv(buf.str(), path);
}

namespace {

// Distance from tick t to the nearest peak of the driver, in ticks.
double distance_to_peak(const CycleDriver& d, int agent, int t) {
  switch (d.kind) {
    case CycleDriver::Kind::Constant:
      return 0.0;  // flat waveform: every tick is a peak
    case CycleDriver::Kind::Sinusoid: {
      double m = d.m, n = d.n;
      if (d.per_agent && agent >= 0 && agent < static_cast<int>(d.per_agent->m.size())) {
        m = d.per_agent->m[agent];
        n = d.per_agent->n[agent];
      }
      if (m == 0.0) return 0.0;
      const double period = 2.0 * kPi / std::abs(m);
      // Peaks where m*t + n = pi/2 (mod 2*pi).
      const double t_peak = (kPi / 2.0 - n) / m;
      double delta = std::fmod(t - t_peak, period);
      if (delta < 0) delta += period;
      return std::min(delta, period - delta);
    }
    case CycleDriver::Kind::Piecewise: {
      const int len = static_cast<int>(d.table.size());
      const double peak = *std::max_element(d.table.begin(), d.table.end());
      const int pos = t % len;
      double best = static_cast<double>(len);
      for (int i = 0; i < len; ++i) {
        if (d.table[i] != peak) continue;
        const int raw = std::abs(pos - i);
        best = std::min(best, static_cast<double>(std::min(raw, len - raw)));
      }
      return best;
    }
  }
  return 0.0;
}

}  // namespace

double coordination_deviation(const CycleDriver& driver, const ActivationSchedule& schedule) {
  if (schedule.empty()) throw EmptySchedule("coordination deviation: schedule is empty");
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& [tick, nodes] : schedule.events) {
    for (int node : nodes) {
      total += distance_to_peak(driver, node, tick);
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

}  // namespace synchrony
