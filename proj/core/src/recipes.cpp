#include "synchrony/recipes.hpp"

#include <cmath>

#include "synchrony/rng.hpp"

namespace synchrony {

std::vector<Lemma2GridEntry> run_lemma2_grid(const Lemma2GridSpec& spec) {
  std::vector<Lemma2GridEntry> entries;
  for (int n = spec.n_lo; n <= spec.n_hi; ++n) {
    for (int k : spec.ks) {
      if (k >= n) continue;
      for (int draw = 0; draw < spec.draws; ++draw) {
        Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(n * 100 + k),
                            static_cast<std::uint64_t>(draw)));
        std::vector<double> t0(n);
        for (double& t : t0) t = rng.uniform(0.0, spec.t0_hi);
        Lemma2GridEntry entry;
        entry.n = n;
        entry.k = k;
        entry.draw = draw;
        entry.cert = verify_lemma2(n, k, spec.p, t0, spec.horizon);
        entries.push_back(std::move(entry));
      }
    }
  }
  return entries;
}

Theorem1GridReport run_theorem1_grid(int n, int k, int horizon, int steps, std::uint64_t seed) {
  Theorem1GridReport report;
  report.n = n;
  report.k = k;
  for (int ia = 1; ia <= steps; ++ia) {
    for (int ib = 1; ib <= steps; ++ib) {
      for (int ix = 0; ix <= steps; ++ix) {
        for (int iy = 0; iy <= steps; ++iy) {
          if (ix == iy) continue;
          GameParams params;
          params.alpha = static_cast<double>(ia) / steps;
          params.beta = static_cast<double>(ib) / steps;
          params.x = static_cast<double>(ix) / steps;
          params.y = static_cast<double>(iy) / steps;
          ++report.points;
          const EquilibriumProbs eq = solve_equilibrium(params);
          const bool premise = (k > n / 2.0) &&
                               eq.raw_active > k * (1.0 - eq.raw_active) &&
                               eq.raw_inactive > k * (1.0 - eq.raw_inactive);
          if (!premise) continue;
          ++report.premise_true;
          std::vector<double> t0(n, 0.2);
          Theorem1Certificate cert =
              verify_theorem1(n, k, params, t0, horizon, 0.5,
                              derive_seed(seed, static_cast<std::uint64_t>(report.points)));
          if (cert.discrepancy) ++report.discrepancies;
          report.premise_true_certs.push_back(std::move(cert));
        }
      }
    }
  }
  return report;
}

CycleSetup make_cycle_setup(double period, bool peak_phase, std::uint64_t seed, int horizon,
                            int n, int d) {
  CycleSetup setup;

  NetworkSpec net;
  net.n = n;
  net.d = d;
  net.p_rewire = 0.3;
  net.seed = derive_seed(seed, 0xC1C1Eu);
  setup.graph = make_small_world(net);

  // Interior willingness (about 6/7 for the active type) so diffusion needs
  // several ticks of high f per cycle and collapses when f bottoms out.
  setup.config.game = GameParams{0.1, 0.15, 0.2, 0.9};
  setup.config.active_fraction = 1.0;
  setup.config.threshold_init = ThresholdUniform{0.0, 0.5};
  setup.config.initial_actors = InitialActorCount{0};
  setup.config.seed = derive_seed(seed, 0x57A7Eu);

  // Peak at t = 0 (mod period); the trough at t = period/2 hits f = 0
  // exactly, which clears all actions once per cycle.
  setup.driver = CycleDriver::sinusoid_with_period(period, 1.5707963267948966);

  const int phase = peak_phase ? 0 : static_cast<int>(std::lround(period / 2.0));
  for (int tick = phase; tick <= horizon; tick += static_cast<int>(std::lround(period)))
    setup.schedule.add(tick, 0);

  setup.horizon = horizon;
  return setup;
}

CalibrationLayout make_calibration_layout(std::uint64_t seed, int n, int d, int month_len) {
  CalibrationLayout layout;

  NetworkSpec net;
  net.n = n;
  net.d = d;
  net.p_rewire = 0.3;
  net.seed = derive_seed(seed, 0xCA11u);
  layout.graph = make_small_world(net);

  // Seasonal peak levels over a 12-month year, graded from dead to full;
  // the waveform runs two sub-cycles per month. How many of a month's
  // sub-waves clear the event threshold is what makes the counts
  // informative about the parameters.
  static const double kAmplitude[12] = {1.0, 0.45, 0.0, 0.8,  0.3, 0.95,
                                        0.2, 0.0,  0.7, 0.5, 0.9, 0.6};
  std::vector<double> table(12 * month_len);
  constexpr double kPi = 3.14159265358979323846;
  const double sub_period = month_len / 2.0;
  for (int t = 0; t < static_cast<int>(table.size()); ++t) {
    const double base = 0.5 * std::sin(2.0 * kPi * t / sub_period + kPi / 2.0) + 0.5;
    table[t] = kAmplitude[(t / month_len) % 12] * base;
  }
  layout.driver = CycleDriver::piecewise(std::move(table));

  layout.schedule = {};
  for (int month = 0; month < 12 * 4; ++month) {  // covers horizons up to 4 years
    layout.schedule.add(month * month_len, 0);
    layout.schedule.add(month * month_len + month_len / 2, 1);
  }

  layout.active_fraction = 1.0;
  layout.threshold_init = ThresholdUniform{0.0, 0.5};
  layout.initial_actors = InitialActorCount{0};
  layout.state_seed = derive_seed(seed, 0x1A10u);
  return layout;
}

}  // namespace synchrony
