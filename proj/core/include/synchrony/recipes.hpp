#pragma once

#include <cstdint>
#include <vector>

#include "synchrony/analysis.hpp"
#include "synchrony/calibrate.hpp"

namespace synchrony {

// Built-in verification setups used by both the CLI's `verify` suites and
// the acceptance tests, so the two always agree on what was checked.

// Ring-lattice grid for the spontaneous-diffusion lemma: every (n, k) with
// n in [n_lo, n_hi], k in {2, 4}, k < n; `draws` random threshold vectors
// from uniform(0, t0_hi) per instance, one seed actor, f = 1/2.
struct Lemma2GridSpec {
  int n_lo = 4;
  int n_hi = 12;
  std::vector<int> ks = {2, 4};
  int draws = 10;
  double p = 0.9;
  double t0_hi = 0.3;
  int horizon = 200;
  std::uint64_t seed = 0;
};

struct Lemma2GridEntry {
  int n = 0;
  int k = 0;
  int draw = 0;
  Lemma2Certificate cert;
};

std::vector<Lemma2GridEntry> run_lemma2_grid(const Lemma2GridSpec& spec);

// Parameter-grid scan for the full-synchronization theorem's premises at one
// (n, k). The two odds inequalities have opposite-signed raw willingness
// values for every valid parameter point, so the scan documents how much of
// the grid (if any) is premise-true before asserting anything.
struct Theorem1GridReport {
  int n = 0;
  int k = 0;
  int points = 0;
  int premise_true = 0;
  int discrepancies = 0;
  std::vector<Theorem1Certificate> premise_true_certs;
};

Theorem1GridReport run_theorem1_grid(int n, int k, int horizon, int steps = 6,
                                     std::uint64_t seed = 0);

// The action-cycle verification configuration: all-active population with
// interior willingness, small-world substrate, sinusoid driver peaking at
// t = 0 (mod period), and one forced seed per cycle at either the peak or
// the trough phase.
struct CycleSetup {
  Graph graph;
  SimConfig config;
  CycleDriver driver = CycleDriver::constant(0.5);
  ActivationSchedule schedule;
  int horizon = 0;
};

CycleSetup make_cycle_setup(double period, bool peak_phase, std::uint64_t seed,
                            int horizon = 200, int n = 50, int d = 6);

// Reference calibration layout: a small-world graph, a month-long waveform
// whose peak level follows a fixed 12-month seasonal pattern (some months
// dead), and one forced seed at every month's peak tick. Month length is 30
// ticks; the driver table tiles across however many months are simulated.
CalibrationLayout make_calibration_layout(std::uint64_t seed, int n = 50, int d = 6,
                                          int month_len = 30);

}  // namespace synchrony
