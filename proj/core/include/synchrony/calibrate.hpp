#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "synchrony/dynamics.hpp"
#include "synchrony/graph.hpp"

namespace synchrony {

// Calibration vector order, fixed everywhere:
// (alpha, beta, x, y, a_p, b_p, a_T, b_T).
inline constexpr int kThetaDim = 8;
using Theta = std::array<double, kThetaDim>;
extern const std::array<const char*, kThetaDim> kThetaNames;

struct ObservedSeries {
  std::vector<int> counts;          // monthly event counts, >= 0
  std::vector<std::string> months;  // labels, same length

  int size() const { return static_cast<int>(counts.size()); }
  void validate() const;  // shape only; length >= 6 is enforced at fit time
};

// CSV with columns month,count (header optional). Errors: ParseError,
// NegativeCount.
ObservedSeries load_series(const std::string& path);
ObservedSeries parse_series(const std::string& text, const std::string& origin = "<string>");
std::string series_to_csv(const ObservedSeries& series);

struct PriorBox {
  std::array<std::pair<double, double>, kThetaDim> bounds;

  static PriorBox defaults();
  void validate() const;
  bool contains(const Theta& theta) const;
  double midpoint(int coord) const;
};

enum class BandwidthRule { Scott, Silverman, Fixed };

struct CalibrationConfig {
  PriorBox priors = PriorBox::defaults();
  int n_draws = 5000;
  double tolerance_quantile = 0.02;  // fraction of best finite-distance draws accepted
  int month_len = 30;                // simulation ticks per calendar month
  double event_pro_threshold = 0.1;  // Pro level that makes a tick part of an event
  BandwidthRule kde_bandwidth = BandwidthRule::Silverman;
  double fixed_bandwidth = 0.05;  // used when kde_bandwidth == Fixed
  int mcmc_chain_length = 20000;
  int mcmc_burn_in = 4000;
  double mcmc_proposal_scale = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
};

// Everything the forward model holds fixed across draws: the social graph,
// the exogenous driver and activation schedule, the type/threshold laws and
// the state-init seed. Sharing the same layout (and so the same initial
// state randomness) across draws makes the distance a deterministic function
// of theta.
struct CalibrationLayout {
  Graph graph;
  CycleDriver driver;
  ActivationSchedule schedule;
  double active_fraction = 1.0;
  ThresholdInit threshold_init = ThresholdUniform{0.0, 0.5};
  InitialActors initial_actors = InitialActorCount{0};
  std::uint64_t state_seed = 0;
};

// Forward model: runs the dynamics under theta, detects events (maximal runs
// of ticks with Pro > event_pro_threshold), bins each event into the month
// of its starting tick. Throws DegenerateBeliefs for |x - y| <= 1e-12.
std::vector<int> simulate_counts(const Theta& theta, const CalibrationConfig& config,
                                 const CalibrationLayout& layout, int months);

// Euclidean distance between count vectors of equal length.
double count_distance(const std::vector<int>& a, const std::vector<int>& b);

struct PosteriorSample {
  Theta theta{};
  double distance = 0.0;  // +inf marks degenerate-belief draws (auto-rejected)
  bool accepted = false;
};

struct AbcResult {
  std::vector<PosteriorSample> samples;   // every draw, draw order
  std::vector<std::size_t> accepted_idx;  // ascending by distance, ties by draw index
  double cutoff = 0.0;
  Theta posterior_mean{};
};

// Rejection ABC: n_draws from the prior box, accept the best
// tolerance_quantile fraction of finite-distance draws. Throws
// TooFewAccepted below 50 accepted draws.
AbcResult abc_fit(const ObservedSeries& observed, const CalibrationConfig& config,
                  const CalibrationLayout& layout, int threads = 0);

// 1-D Gaussian-kernel density over a sample set.
class Kde1D {
 public:
  Kde1D(std::vector<double> samples, BandwidthRule rule, double fixed_h = 0.05);

  double bandwidth() const { return h_; }
  double density(double x) const;
  double log_density(double x) const;
  double sample_mean() const { return mean_; }

 private:
  std::vector<double> samples_;
  double h_ = 0.0;
  double mean_ = 0.0;
};

// Product of per-coordinate KDEs; the posterior smoother the summaries run on.
class ProductDensity {
 public:
  explicit ProductDensity(std::vector<Kde1D> factors) : factors_(std::move(factors)) {}

  int dim() const { return static_cast<int>(factors_.size()); }
  const Kde1D& factor(int i) const { return factors_[i]; }
  double log_density(const std::vector<double>& x) const;

 private:
  std::vector<Kde1D> factors_;
};

// Per-coordinate KDE over the accepted draws of an ABC run.
ProductDensity kde_density(const AbcResult& abc, const CalibrationConfig& config);

struct McmcSummary {
  std::vector<double> mean;
  std::vector<double> lo90;  // central 90% interval bounds
  std::vector<double> hi90;
  double acceptance_rate = 0.0;
  double adapted_scale = 0.0;
};

// Random-walk Metropolis targeting the product density. The proposal scale
// adapts toward an acceptance rate in [0.1, 0.6] during burn-in only. Throws
// ChainStuck when the scale is non-positive or post-burn-in acceptance falls
// below 1%.
McmcSummary mcmc_summarize(const ProductDensity& density, const CalibrationConfig& config,
                           const std::vector<double>& start);

}  // namespace synchrony
