#include "synchrony/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "synchrony/rng.hpp"

namespace synchrony {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> parts;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) parts.push_back(tok);
  return parts;
}

double parse_number(const std::string& s, const std::string& origin, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(origin, line, "expected a number, got '" + s + "'");
  }
}

}  // namespace

ParsedConfig ParsedConfig::from_text(const std::string& text, const std::string& origin) {
  ParsedConfig cfg;
  cfg.origin_ = origin;
  cfg.text_ = text;
  std::istringstream in(text);
  std::string line;
  std::string section;  // top-level keys live in ""
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(origin, line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(origin, line_no, "empty section name");
      cfg.sections_[section];  // sections may stay empty
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin, line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(origin, line_no, "empty key");
    cfg.sections_[section].push_back({key, {value, line_no}});
  }
  return cfg;
}

ParsedConfig ParsedConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str(), path);
}

bool ParsedConfig::has_section(const std::string& section) const {
  return sections_.count(section) > 0;
}

bool ParsedConfig::has(const std::string& section, const std::string& key) const {
  return get(section, key).has_value();
}

std::optional<std::string> ParsedConfig::get(const std::string& section,
                                             const std::string& key) const {
  const auto it = sections_.find(section);
  if (it == sections_.end()) return std::nullopt;
  for (auto rit = it->second.rbegin(); rit != it->second.rend(); ++rit)
    if (rit->first == key) return rit->second.value;
  return std::nullopt;
}

std::vector<ParsedConfig::Entry> ParsedConfig::get_all(const std::string& section,
                                                       const std::string& key) const {
  std::vector<Entry> out;
  const auto it = sections_.find(section);
  if (it == sections_.end()) return out;
  for (const auto& [k, entry] : it->second)
    if (k == key) out.push_back(entry);
  return out;
}

std::vector<std::pair<std::string, ParsedConfig::Entry>> ParsedConfig::entries(
    const std::string& section) const {
  const auto it = sections_.find(section);
  if (it == sections_.end()) return {};
  return it->second;
}

void ParsedConfig::fail(const std::string& section, const std::string& key,
                        const std::string& msg) const {
  const auto it = sections_.find(section);
  int line = 0;
  if (it != sections_.end())
    for (const auto& [k, entry] : it->second)
      if (k == key) line = entry.line;
  throw ConfigError(origin_, line, "[" + section + "] " + key + ": " + msg);
}

double ParsedConfig::get_number(const std::string& section, const std::string& key,
                                double fallback) const {
  const auto v = get(section, key);
  if (!v) return fallback;
  const auto all = get_all(section, key);
  return parse_number(*v, origin_, all.back().line);
}

double ParsedConfig::require_number(const std::string& section, const std::string& key) const {
  const auto v = get(section, key);
  if (!v) throw ConfigError(origin_, 0, "missing required key [" + section + "] " + key);
  const auto all = get_all(section, key);
  return parse_number(*v, origin_, all.back().line);
}

int ParsedConfig::get_int(const std::string& section, const std::string& key,
                          int fallback) const {
  const double v = get_number(section, key, static_cast<double>(fallback));
  return static_cast<int>(std::llround(v));
}

std::uint64_t ParsedConfig::get_seed(std::uint64_t fallback) const {
  const auto v = get("", "seed");
  if (!v) return fallback;
  const auto all = get_all("", "seed");
  try {
    return std::stoull(*v);
  } catch (const std::exception&) {
    throw ConfigError(origin_, all.back().line, "seed: expected an unsigned integer");
  }
}

std::string ParsedConfig::get_string(const std::string& section, const std::string& key,
                                     const std::string& fallback) const {
  return get(section, key).value_or(fallback);
}

bool ParsedConfig::get_bool(const std::string& section, const std::string& key,
                            bool fallback) const {
  const auto v = get(section, key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  fail(section, key, "expected true/false");
}

std::vector<double> ParsedConfig::get_numbers(const std::string& section,
                                              const std::string& key) const {
  const auto v = get(section, key);
  if (!v) return {};
  const auto all = get_all(section, key);
  std::vector<double> out;
  for (const auto& tok : split_ws(*v)) out.push_back(parse_number(tok, origin_, all.back().line));
  return out;
}

namespace {

GameParams read_game(const ParsedConfig& cfg) {
  GameParams game;
  game.alpha = cfg.require_number("game", "alpha");
  game.beta = cfg.require_number("game", "beta");
  game.x = cfg.require_number("game", "x");
  game.y = cfg.require_number("game", "y");
  return game;
}

NetworkSpec read_network(const ParsedConfig& cfg, std::uint64_t seed) {
  NetworkSpec net;
  net.n = cfg.get_int("network", "n", 50);
  net.d = cfg.get_int("network", "d", 4);
  net.p_rewire = cfg.get_number("network", "p_rewire", 0.3);
  net.seed = seed;
  return net;
}

Graph read_graph(const ParsedConfig& cfg, std::uint64_t seed) {
  const std::string kind = cfg.get_string("network", "kind", "small-world");
  if (kind == "edge-list") {
    const std::string path = cfg.get_string("network", "path", "");
    if (path.empty()) cfg.fail("network", "path", "edge-list networks need a path");
    return load_edge_list(path);
  }
  if (kind == "ring") {
    return make_regular_ring(cfg.get_int("network", "n", 50), cfg.get_int("network", "d", 4));
  }
  if (kind == "small-world") {
    return make_small_world(read_network(cfg, derive_seed(seed, 0xA11CEu)));
  }
  cfg.fail("network", "kind", "unknown kind '" + kind + "' (ring | small-world | edge-list)");
}

ThresholdInit read_threshold_init(const ParsedConfig& cfg) {
  const auto v = cfg.get("dynamics", "threshold_init");
  if (!v) return ThresholdUniform{0.0, 0.5};
  const auto parts = split_ws(*v);
  if (parts.empty()) cfg.fail("dynamics", "threshold_init", "empty value");
  const auto line = cfg.get_all("dynamics", "threshold_init").back().line;
  if (parts[0] == "uniform") {
    if (parts.size() != 3)
      cfg.fail("dynamics", "threshold_init", "expected 'uniform lo hi'");
    return ThresholdUniform{parse_number(parts[1], cfg.origin(), line),
                            parse_number(parts[2], cfg.origin(), line)};
  }
  if (parts[0] == "constant") {
    if (parts.size() != 2) cfg.fail("dynamics", "threshold_init", "expected 'constant c'");
    return ThresholdConstant{parse_number(parts[1], cfg.origin(), line)};
  }
  if (parts[0] == "explicit") {
    std::vector<double> values;
    for (std::size_t i = 1; i < parts.size(); ++i)
      values.push_back(parse_number(parts[i], cfg.origin(), line));
    return values;
  }
  cfg.fail("dynamics", "threshold_init", "expected uniform | constant | explicit");
}

InitialActors read_initial_actors(const ParsedConfig& cfg) {
  const auto v = cfg.get("dynamics", "initial_actors");
  if (!v) return InitialActorCount{1};
  const auto parts = split_ws(*v);
  if (parts.empty()) cfg.fail("dynamics", "initial_actors", "empty value");
  const auto line = cfg.get_all("dynamics", "initial_actors").back().line;
  if (parts[0] == "count") {
    if (parts.size() != 2) cfg.fail("dynamics", "initial_actors", "expected 'count k'");
    return InitialActorCount{static_cast<int>(parse_number(parts[1], cfg.origin(), line))};
  }
  if (parts[0] == "nodes") {
    std::vector<int> nodes;
    for (std::size_t i = 1; i < parts.size(); ++i)
      nodes.push_back(static_cast<int>(parse_number(parts[i], cfg.origin(), line)));
    return nodes;
  }
  cfg.fail("dynamics", "initial_actors", "expected count | nodes");
}

AffineLinkage read_linkage(const ParsedConfig& cfg) {
  const auto values = cfg.get_numbers("dynamics", "linkage");
  if (values.empty()) return AffineLinkage::identity();
  if (values.size() != 4)
    cfg.fail("dynamics", "linkage", "expected four numbers: a_p b_p a_T b_T");
  return AffineLinkage{values[0], values[1], values[2], values[3]};
}

CycleDriver read_driver(const ParsedConfig& cfg) {
  const std::string kind = cfg.get_string("driver", "kind", "constant");
  if (kind == "constant") {
    return CycleDriver::constant(cfg.get_number("driver", "value", 0.5));
  }
  if (kind == "sinusoid") {
    if (cfg.has("driver", "period")) {
      return CycleDriver::sinusoid_with_period(cfg.require_number("driver", "period"),
                                               cfg.get_number("driver", "phase", 0.0));
    }
    return CycleDriver::sinusoid(cfg.require_number("driver", "m"),
                                 cfg.get_number("driver", "n", 0.0));
  }
  if (kind == "piecewise") {
    return CycleDriver::piecewise(cfg.get_numbers("driver", "table"));
  }
  if (kind == "seasonal") {
    // Sugar for a piecewise table: a base waveform of period `sub_period`
    // scaled by one amplitude per block of `block_len` ticks.
    const auto amplitudes = cfg.get_numbers("driver", "amplitudes");
    if (amplitudes.empty()) cfg.fail("driver", "amplitudes", "seasonal drivers need amplitudes");
    const int block_len = cfg.get_int("driver", "block_len", 30);
    const double sub_period = cfg.get_number("driver", "sub_period", block_len / 2.0);
    if (block_len < 1) cfg.fail("driver", "block_len", "must be >= 1");
    if (sub_period <= 0) cfg.fail("driver", "sub_period", "must be > 0");
    std::vector<double> table(amplitudes.size() * block_len);
    constexpr double kPi = 3.14159265358979323846;
    for (std::size_t t = 0; t < table.size(); ++t) {
      const double base = 0.5 * std::sin(2.0 * kPi * t / sub_period + kPi / 2.0) + 0.5;
      table[t] = amplitudes[(t / block_len) % amplitudes.size()] * base;
    }
    return CycleDriver::piecewise(std::move(table));
  }
  cfg.fail("driver", "kind",
           "unknown kind '" + kind + "' (constant | sinusoid | piecewise | seasonal)");
}

ActivationSchedule read_schedule(const ParsedConfig& cfg) {
  ActivationSchedule schedule;
  if (cfg.has("schedule", "path"))
    schedule = ActivationSchedule::load_csv(*cfg.get("schedule", "path"));
  for (const auto& entry : cfg.get_all("schedule", "event")) {
    const auto parts = split_ws(entry.value);
    if (parts.size() != 2)
      throw ConfigError(cfg.origin(), entry.line, "event: expected 'tick node'");
    schedule.add(static_cast<int>(parse_number(parts[0], cfg.origin(), entry.line)),
                 static_cast<int>(parse_number(parts[1], cfg.origin(), entry.line)));
  }
  // Repeating schedules: 'repeat = phase period count node' forces one node
  // at phase + k*period for k in [0, count).
  for (const auto& entry : cfg.get_all("schedule", "repeat")) {
    const auto parts = split_ws(entry.value);
    if (parts.size() != 4)
      throw ConfigError(cfg.origin(), entry.line, "repeat: expected 'phase period count node'");
    const int phase = static_cast<int>(parse_number(parts[0], cfg.origin(), entry.line));
    const int period = static_cast<int>(parse_number(parts[1], cfg.origin(), entry.line));
    const int count = static_cast<int>(parse_number(parts[2], cfg.origin(), entry.line));
    const int node = static_cast<int>(parse_number(parts[3], cfg.origin(), entry.line));
    if (period < 1) throw ConfigError(cfg.origin(), entry.line, "repeat: period must be >= 1");
    for (int k = 0; k < count; ++k) schedule.add(phase + k * period, node);
  }
  return schedule;
}

}  // namespace

SimulateSetup build_simulate_setup(const ParsedConfig& cfg,
                                   std::optional<std::uint64_t> seed_override) {
  SimulateSetup setup;
  setup.seed = seed_override.value_or(cfg.get_seed(1));
  setup.graph = read_graph(cfg, setup.seed);

  setup.sim.game = read_game(cfg);
  if (cfg.has("dynamics", "willingness")) {
    const auto v = cfg.get_numbers("dynamics", "willingness");
    if (v.size() != 2)
      cfg.fail("dynamics", "willingness", "expected two numbers: p_active p_inactive");
    setup.sim.willingness = {v[0], v[1]};
  }
  setup.sim.active_fraction = cfg.get_number("dynamics", "active_fraction", 1.0);
  setup.sim.threshold_init = read_threshold_init(cfg);
  setup.sim.initial_actors = read_initial_actors(cfg);
  setup.sim.linkage = read_linkage(cfg);
  setup.sim.closed_neighborhood_averaging = cfg.get_bool("dynamics", "closed_averaging", false);
  setup.sim.seed = derive_seed(setup.seed, 0x57A7Eu);

  setup.horizon = cfg.get_int("dynamics", "horizon", 50);
  if (setup.horizon < 1) cfg.fail("dynamics", "horizon", "must be >= 1");
  setup.driver = read_driver(cfg);
  setup.schedule = read_schedule(cfg);
  setup.snapshot_every = cfg.get_int("output", "snapshot_every", 1);
  if (setup.snapshot_every < 0) cfg.fail("output", "snapshot_every", "must be >= 0");
  return setup;
}

SweepSpec build_sweep_spec(const ParsedConfig& cfg,
                           std::optional<std::uint64_t> seed_override) {
  SweepSpec spec;
  spec.seed = seed_override.value_or(cfg.get_seed(1));
  spec.replicates = cfg.get_int("sweep", "replicates", 1);
  spec.horizon = cfg.get_int("sweep", "horizon", 100);

  spec.game = read_game(cfg);
  spec.active_fraction = cfg.get_number("dynamics", "active_fraction", 1.0);
  spec.network = read_network(cfg, 0);
  spec.threshold_init = read_threshold_init(cfg);
  spec.initial_actors = read_initial_actors(cfg);
  spec.linkage = read_linkage(cfg);
  spec.driver = read_driver(cfg);
  spec.schedule = read_schedule(cfg);

  // Axis declarations, in file order: 'axis.<name> = v1 v2 ...'.
  for (const auto& [key, entry] : cfg.entries("sweep")) {
    if (key.rfind("axis.", 0) != 0) continue;
    SweepAxis axis;
    axis.name = key.substr(5);
    for (const auto& tok : split_ws(entry.value))
      axis.values.push_back(parse_number(tok, cfg.origin(), entry.line));
    spec.axes.push_back(std::move(axis));
  }
  spec.validate();
  return spec;
}

CalibrationSetup build_calibration_setup(const ParsedConfig& cfg,
                                         std::optional<std::uint64_t> seed_override) {
  CalibrationSetup setup;
  const std::uint64_t seed = seed_override.value_or(cfg.get_seed(1));

  CalibrationConfig& cal = setup.config;
  cal.seed = seed;
  cal.n_draws = cfg.get_int("abc", "n_draws", 5000);
  cal.tolerance_quantile = cfg.get_number("abc", "tolerance_quantile", 0.02);
  cal.month_len = cfg.get_int("abc", "month_len", 30);
  cal.event_pro_threshold = cfg.get_number("abc", "event_pro_threshold", 0.1);
  const std::string rule = cfg.get_string("abc", "kde_bandwidth", "silverman");
  if (rule == "silverman") {
    cal.kde_bandwidth = BandwidthRule::Silverman;
  } else if (rule == "scott") {
    cal.kde_bandwidth = BandwidthRule::Scott;
  } else if (rule.rfind("fixed", 0) == 0) {
    cal.kde_bandwidth = BandwidthRule::Fixed;
    const auto parts = split_ws(rule);
    if (parts.size() == 2)
      cal.fixed_bandwidth = parse_number(parts[1], cfg.origin(),
                                         cfg.get_all("abc", "kde_bandwidth").back().line);
  } else {
    cfg.fail("abc", "kde_bandwidth", "expected scott | silverman | fixed <h>");
  }
  cal.mcmc_chain_length = cfg.get_int("mcmc", "chain_length", 20000);
  cal.mcmc_burn_in = cfg.get_int("mcmc", "burn_in", 4000);
  cal.mcmc_proposal_scale = cfg.get_number("mcmc", "proposal_scale", 0.5);

  for (int c = 0; c < kThetaDim; ++c) {
    if (!cfg.has("priors", kThetaNames[c])) continue;
    const auto v = cfg.get_numbers("priors", kThetaNames[c]);
    if (v.size() != 2) cfg.fail("priors", kThetaNames[c], "expected 'lo hi'");
    cal.priors.bounds[c] = {v[0], v[1]};
  }
  cal.validate();

  CalibrationLayout& layout = setup.layout;
  layout.graph = read_graph(cfg, seed);
  layout.driver = read_driver(cfg);
  layout.schedule = read_schedule(cfg);
  layout.active_fraction = cfg.get_number("dynamics", "active_fraction", 1.0);
  layout.threshold_init = read_threshold_init(cfg);
  if (cfg.has("dynamics", "initial_actors")) {
    layout.initial_actors = read_initial_actors(cfg);
  } else {
    layout.initial_actors = InitialActorCount{0};  // activation comes from the schedule
  }
  layout.state_seed = derive_seed(seed, 0x1A10u);
  return setup;
}

}  // namespace synchrony
