#include "synchrony/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "synchrony/csv.hpp"
#include "synchrony/pool.hpp"
#include "synchrony/rng.hpp"

namespace synchrony {

const std::array<const char*, kThetaDim> kThetaNames = {"alpha", "beta", "x",  "y",
                                                        "ap",    "bp",   "aT", "bT"};

void ObservedSeries::validate() const {
  if (counts.size() != months.size())
    throw ValidationError("series: months and counts lengths differ");
  for (int c : counts)
    if (c < 0) throw NegativeCount("series: negative count");
}

ObservedSeries parse_series(const std::string& text, const std::string& origin) {
  ObservedSeries series;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line_no == 1 && line.find("month") != std::string::npos) continue;  // header
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ParseError(origin + ":" + std::to_string(line_no) + ": expected 'month,count'");
    const std::string month = line.substr(0, comma);
    const std::string count_str = line.substr(comma + 1);
    try {
      std::size_t used = 0;
      const long long count = std::stoll(count_str, &used);
      if (used != count_str.size() &&
          count_str.find_first_not_of(" \t", used) != std::string::npos)
        throw std::invalid_argument("trailing");
      if (count < 0)
        throw NegativeCount(origin + ":" + std::to_string(line_no) + ": negative count");
      series.months.push_back(month);
      series.counts.push_back(static_cast<int>(count));
    } catch (const NegativeCount&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError(origin + ":" + std::to_string(line_no) + ": bad count '" + count_str +
                       "'");
    }
  }
  if (series.counts.empty()) throw ParseError(origin + ": no data rows");
  series.validate();
  return series;
}

ObservedSeries load_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_series(buf.str(), path);
}

std::string series_to_csv(const ObservedSeries& series) {
  std::ostringstream out;
  out << "month,count\n";
  for (int i = 0; i < series.size(); ++i)
    out << series.months[i] << ',' << series.counts[i] << '\n';
  return out.str();
}

PriorBox PriorBox::defaults() {
  PriorBox box;
  box.bounds[0] = {0.1, 1.0};   // alpha
  box.bounds[1] = {0.1, 1.0};   // beta
  box.bounds[2] = {0.0, 1.0};   // x
  box.bounds[3] = {0.0, 1.0};   // y
  box.bounds[4] = {0.05, 0.65};  // a_p
  box.bounds[5] = {0.05, 0.65};  // b_p
  box.bounds[6] = {0.05, 0.65};  // a_T
  box.bounds[7] = {0.05, 0.65};  // b_T
  return box;
}

void PriorBox::validate() const {
  for (int i = 0; i < kThetaDim; ++i) {
    const auto& [lo, hi] = bounds[i];
    if (!(lo < hi)) throw ValidationError(std::string("priors: empty range for ") + kThetaNames[i]);
    if (i < 2 && lo <= 0.0)
      throw ValidationError(std::string("priors: ") + kThetaNames[i] + " must be > 0");
    if (i >= 2 && (lo < 0.0 || hi > 1.0))
      throw ValidationError(std::string("priors: ") + kThetaNames[i] + " must lie in [0, 1]");
  }
}

bool PriorBox::contains(const Theta& theta) const {
  for (int i = 0; i < kThetaDim; ++i)
    if (theta[i] < bounds[i].first || theta[i] > bounds[i].second) return false;
  return true;
}

double PriorBox::midpoint(int coord) const {
  return 0.5 * (bounds[coord].first + bounds[coord].second);
}

void CalibrationConfig::validate() const {
  priors.validate();
  if (n_draws < 1) throw ValidationError("abc: n_draws must be >= 1");
  if (!(tolerance_quantile > 0.0 && tolerance_quantile <= 1.0))
    throw ValidationError("abc: tolerance_quantile must lie in (0, 1]");
  if (month_len < 1) throw ValidationError("abc: month_len must be >= 1");
  if (event_pro_threshold < 0.0 || event_pro_threshold >= 1.0)
    throw ValidationError("abc: event_pro_threshold must lie in [0, 1)");
  if (mcmc_chain_length < 100) throw ValidationError("mcmc: chain too short");
  if (mcmc_burn_in < 0 || mcmc_burn_in >= mcmc_chain_length)
    throw ValidationError("mcmc: burn-in must lie in [0, chain length)");
}

std::vector<int> simulate_counts(const Theta& theta, const CalibrationConfig& config,
                                 const CalibrationLayout& layout, int months) {
  if (months < 1) throw ValidationError("abc: months must be >= 1");
  SimConfig sim;
  sim.game = GameParams{theta[0], theta[1], theta[2], theta[3]};
  sim.linkage = AffineLinkage{theta[4], theta[5], theta[6], theta[7]};
  sim.active_fraction = layout.active_fraction;
  sim.threshold_init = layout.threshold_init;
  sim.initial_actors = layout.initial_actors;
  sim.seed = layout.state_seed;

  const int horizon = months * config.month_len;
  const Trajectory traj = run(layout.graph, sim, layout.driver, horizon, layout.schedule, false);

  // An event is a maximal run of ticks with Pro above the threshold; it is
  // credited to the month containing its first tick.
  std::vector<int> counts(months, 0);
  bool in_event = false;
  for (std::size_t t = 0; t < traj.pro.size(); ++t) {
    const bool above = traj.pro[t] > config.event_pro_threshold;
    if (above && !in_event) {
      const int month = std::min(static_cast<int>(t) / config.month_len, months - 1);
      ++counts[month];
    }
    in_event = above;
  }
  return counts;
}

double count_distance(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size())
    throw ValidationError("distance: count vectors of different lengths");
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    sq += d * d;
  }
  return std::sqrt(sq);
}

AbcResult abc_fit(const ObservedSeries& observed, const CalibrationConfig& config,
                  const CalibrationLayout& layout, int threads) {
  config.validate();
  observed.validate();
  if (observed.size() < 6) throw ValidationError("abc: observed series must have >= 6 months");

  AbcResult result;
  result.samples.resize(config.n_draws);

  // Draw all thetas up front from a single stream, then simulate in parallel.
  {
    Rng rng(derive_seed(config.seed, 0xABCu));
    for (int i = 0; i < config.n_draws; ++i) {
      Theta theta;
      for (int c = 0; c < kThetaDim; ++c)
        theta[c] = rng.uniform(config.priors.bounds[c].first, config.priors.bounds[c].second);
      result.samples[i].theta = theta;
    }
  }

  const int months = observed.size();
  run_indexed_jobs(config.n_draws, threads, [&](int i) {
    PosteriorSample& sample = result.samples[i];
    try {
      const std::vector<int> counts = simulate_counts(sample.theta, config, layout, months);
      sample.distance = count_distance(counts, observed.counts);
    } catch (const DegenerateBeliefs&) {
      sample.distance = std::numeric_limits<double>::infinity();
    }
  });

  // Accept the best quantile among finite-distance draws; degenerate draws
  // never qualify. Ties break by draw index so shrinking the quantile nests.
  std::vector<std::size_t> finite;
  for (std::size_t i = 0; i < result.samples.size(); ++i)
    if (std::isfinite(result.samples[i].distance)) finite.push_back(i);
  std::stable_sort(finite.begin(), finite.end(), [&](std::size_t a, std::size_t b) {
    if (result.samples[a].distance != result.samples[b].distance)
      return result.samples[a].distance < result.samples[b].distance;
    return a < b;
  });

  const std::size_t n_accept = static_cast<std::size_t>(
      std::ceil(config.tolerance_quantile * static_cast<double>(finite.size())));
  if (n_accept < 50)
    throw TooFewAccepted("abc: only " + std::to_string(n_accept) +
                         " draws would be accepted (need >= 50)");
  result.accepted_idx.assign(finite.begin(), finite.begin() + n_accept);
  for (std::size_t idx : result.accepted_idx) result.samples[idx].accepted = true;
  result.cutoff = result.samples[result.accepted_idx.back()].distance;

  result.posterior_mean.fill(0.0);
  for (std::size_t idx : result.accepted_idx)
    for (int c = 0; c < kThetaDim; ++c) result.posterior_mean[c] += result.samples[idx].theta[c];
  for (int c = 0; c < kThetaDim; ++c)
    result.posterior_mean[c] /= static_cast<double>(n_accept);
  return result;
}

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014327;
}

Kde1D::Kde1D(std::vector<double> samples, BandwidthRule rule, double fixed_h)
    : samples_(std::move(samples)) {
  if (samples_.size() < 2) throw ValidationError("kde: need at least 2 samples");
  const double n = static_cast<double>(samples_.size());
  mean_ = std::accumulate(samples_.begin(), samples_.end(), 0.0) / n;
  double var = 0.0;
  for (double s : samples_) var += (s - mean_) * (s - mean_);
  var /= (n - 1.0);
  const double sd = std::sqrt(var);

  switch (rule) {
    case BandwidthRule::Fixed:
      h_ = fixed_h;
      break;
    case BandwidthRule::Scott:
      h_ = 1.06 * sd * std::pow(n, -0.2);
      break;
    case BandwidthRule::Silverman: {
      std::vector<double> sorted = samples_;
      std::sort(sorted.begin(), sorted.end());
      const auto quantile = [&](double q) {
        const double pos = q * (n - 1.0);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(lo);
        if (lo + 1 >= sorted.size()) return sorted.back();
        return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
      };
      const double iqr = quantile(0.75) - quantile(0.25);
      const double spread = (iqr > 0.0) ? std::min(sd, iqr / 1.34) : sd;
      h_ = 0.9 * spread * std::pow(n, -0.2);
      break;
    }
  }
  if (!(h_ > 1e-12 * std::max(1.0, std::abs(mean_))))
    throw DegenerateBandwidth("kde: zero-variance sample set (bandwidth would be 0)");
}

double Kde1D::density(double x) const {
  const double n = static_cast<double>(samples_.size());
  double sum = 0.0;
  for (double s : samples_) {
    const double z = (x - s) / h_;
    sum += std::exp(-0.5 * z * z);
  }
  return kInvSqrt2Pi * sum / (n * h_);
}

double Kde1D::log_density(double x) const {
  const double d = density(x);
  if (d <= 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(d);
}

double ProductDensity::log_density(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != dim())
    throw ValidationError("density: dimension mismatch");
  double sum = 0.0;
  for (int i = 0; i < dim(); ++i) sum += factors_[i].log_density(x[i]);
  return sum;
}

ProductDensity kde_density(const AbcResult& abc, const CalibrationConfig& config) {
  if (abc.accepted_idx.size() < 50)
    throw TooFewAccepted("kde: need >= 50 accepted draws");
  std::vector<Kde1D> factors;
  factors.reserve(kThetaDim);
  for (int c = 0; c < kThetaDim; ++c) {
    std::vector<double> coord;
    coord.reserve(abc.accepted_idx.size());
    for (std::size_t idx : abc.accepted_idx) coord.push_back(abc.samples[idx].theta[c]);
    factors.emplace_back(std::move(coord), config.kde_bandwidth, config.fixed_bandwidth);
  }
  return ProductDensity(std::move(factors));
}

McmcSummary mcmc_summarize(const ProductDensity& density, const CalibrationConfig& config,
                           const std::vector<double>& start) {
  config.validate();
  if (static_cast<int>(start.size()) != density.dim())
    throw ValidationError("mcmc: start vector dimension mismatch");
  if (config.mcmc_proposal_scale <= 0.0)
    throw ChainStuck("mcmc: proposal scale must be > 0 (chain cannot move)");

  const int dim = density.dim();
  Rng rng(derive_seed(config.seed, 0x3C3Cu));

  // Per-coordinate base step: proposal_scale times the factor bandwidth,
  // which tracks the sample spread.
  std::vector<double> base_step(dim);
  for (int i = 0; i < dim; ++i)
    base_step[i] = std::max(1e-8, density.factor(i).bandwidth());
  double scale = config.mcmc_proposal_scale;

  std::vector<double> current = start;
  double current_log = density.log_density(current);
  std::vector<std::vector<double>> chain;
  chain.reserve(config.mcmc_chain_length - config.mcmc_burn_in);

  int accepted_post_burn = 0;
  int post_burn = 0;
  int window_accepts = 0;
  int window_size = 0;

  std::vector<double> proposal(dim);
  for (int step_idx = 0; step_idx < config.mcmc_chain_length; ++step_idx) {
    for (int i = 0; i < dim; ++i)
      proposal[i] = current[i] + scale * base_step[i] * rng.normal();
    const double prop_log = density.log_density(proposal);
    const double log_ratio = prop_log - current_log;
    bool accept = false;
    if (log_ratio >= 0.0) {
      accept = true;
    } else {
      accept = rng.uniform01() < std::exp(log_ratio);
    }
    if (accept) {
      current = proposal;
      current_log = prop_log;
    }

    const bool in_burn = step_idx < config.mcmc_burn_in;
    if (in_burn) {
      window_accepts += accept ? 1 : 0;
      if (++window_size == 100) {
        const double rate = window_accepts / 100.0;
        if (rate < 0.1) scale *= 0.7;
        if (rate > 0.6) scale *= 1.4;
        window_accepts = 0;
        window_size = 0;
      }
    } else {
      ++post_burn;
      accepted_post_burn += accept ? 1 : 0;
      chain.push_back(current);
    }
  }

  McmcSummary summary;
  summary.adapted_scale = scale;
  summary.acceptance_rate = post_burn > 0 ? static_cast<double>(accepted_post_burn) / post_burn
                                          : 0.0;
  if (summary.acceptance_rate < 0.01)
    throw ChainStuck("mcmc: acceptance rate below 1% after adaptation");

  summary.mean.assign(dim, 0.0);
  for (const auto& x : chain)
    for (int i = 0; i < dim; ++i) summary.mean[i] += x[i];
  for (int i = 0; i < dim; ++i) summary.mean[i] /= static_cast<double>(chain.size());

  summary.lo90.resize(dim);
  summary.hi90.resize(dim);
  std::vector<double> coord(chain.size());
  for (int i = 0; i < dim; ++i) {
    for (std::size_t s = 0; s < chain.size(); ++s) coord[s] = chain[s][i];
    std::sort(coord.begin(), coord.end());
    const auto pick = [&](double q) {
      const std::size_t pos = static_cast<std::size_t>(q * (coord.size() - 1));
      return coord[pos];
    };
    summary.lo90[i] = pick(0.05);
    summary.hi90[i] = pick(0.95);
  }
  return summary;
}

}  // namespace synchrony
