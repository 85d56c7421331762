#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

namespace synchrony::cli {

struct CommonArgs {
  std::string config_path;
  std::string from_manifest;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

int cmd_simulate(const CommonArgs& args);
int cmd_sweep(const CommonArgs& args);
int cmd_verify(const std::string& suite, const CommonArgs& args);
int cmd_calibrate(const std::string& series_path, const CommonArgs& args);

struct GenNetworkArgs {
  std::string kind = "small-world";
  int n = 50;
  int d = 4;
  double p_rewire = 0.3;
  std::uint64_t seed = 1;
  std::string out_dir;
  bool quiet = false;
};

int cmd_gen_network(const GenNetworkArgs& args);

// Maps engine exceptions to the documented exit codes: 2 for config/input
// problems, 3 for runtime failures.
int run_guarded(const std::function<int()>& body);

}  // namespace synchrony::cli
