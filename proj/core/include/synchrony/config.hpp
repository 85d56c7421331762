#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "synchrony/calibrate.hpp"
#include "synchrony/dynamics.hpp"
#include "synchrony/sweep.hpp"

namespace synchrony {

// Declarative run configs: '#' comments, [section] headers, 'key = value'
// lines. Keys may repeat (schedule events, sweep axes). Values are free-form
// strings; typed accessors parse them and report file:line on failure.
class ParsedConfig {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static ParsedConfig from_text(const std::string& text, const std::string& origin = "<config>");
  static ParsedConfig from_file(const std::string& path);

  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;
  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  std::vector<Entry> get_all(const std::string& section, const std::string& key) const;
  // Entries of a section in file order (for axis declarations).
  std::vector<std::pair<std::string, Entry>> entries(const std::string& section) const;

  double get_number(const std::string& section, const std::string& key, double fallback) const;
  double require_number(const std::string& section, const std::string& key) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  std::uint64_t get_seed(std::uint64_t fallback) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::vector<double> get_numbers(const std::string& section, const std::string& key) const;

  const std::string& origin() const { return origin_; }
  // The raw text, kept verbatim so manifests can reproduce runs.
  const std::string& text() const { return text_; }

  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& msg) const;

 private:
  std::string origin_;
  std::string text_;
  std::map<std::string, std::vector<std::pair<std::string, Entry>>> sections_;
};

// Everything a simulate run needs, assembled from a config file.
struct SimulateSetup {
  Graph graph;
  SimConfig sim;
  CycleDriver driver = CycleDriver::constant(0.5);
  ActivationSchedule schedule;
  int horizon = 50;
  int snapshot_every = 1;
  std::uint64_t seed = 0;
};

SimulateSetup build_simulate_setup(const ParsedConfig& cfg,
                                   std::optional<std::uint64_t> seed_override = {});

SweepSpec build_sweep_spec(const ParsedConfig& cfg,
                           std::optional<std::uint64_t> seed_override = {});

struct CalibrationSetup {
  CalibrationConfig config;
  CalibrationLayout layout;
};

CalibrationSetup build_calibration_setup(const ParsedConfig& cfg,
                                         std::optional<std::uint64_t> seed_override = {});

}  // namespace synchrony
