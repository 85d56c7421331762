#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "synchrony/calibrate.hpp"
#include "synchrony/recipes.hpp"
#include "synchrony/rng.hpp"

using namespace synchrony;

namespace {

CalibrationConfig quick_config(int n_draws, double quantile, std::uint64_t seed) {
  CalibrationConfig cfg;
  cfg.n_draws = n_draws;
  cfg.tolerance_quantile = quantile;
  cfg.seed = seed;
  return cfg;
}

const Theta kInteriorTheta = {0.3, 0.6, 0.25, 0.85, 0.5, 0.5, 0.5, 0.5};

ObservedSeries series_from_counts(const std::vector<int>& counts) {
  ObservedSeries s;
  s.counts = counts;
  for (std::size_t i = 0; i < counts.size(); ++i)
    s.months.push_back("m" + std::to_string(i));
  return s;
}

}  // namespace

TEST_CASE("series parsing") {
  const auto s = parse_series("2019-01,3\n2019-02,0\n");
  REQUIRE(s.size() == 2);
  CHECK(s.months[0] == "2019-01");
  CHECK(s.counts == std::vector<int>{3, 0});
  CHECK_THROWS_AS(parse_series("2019-01,-1\n"), NegativeCount);
  CHECK_THROWS_AS(parse_series(""), ParseError);
  CHECK_THROWS_AS(parse_series("2019-01\n"), ParseError);
  CHECK_THROWS_AS(parse_series("2019-01,abc\n"), ParseError);
  const auto with_header = parse_series("month,count\n2019-01,3\n");
  CHECK(with_header.size() == 1);
}

TEST_CASE("count distance is a metric on random triples") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int len = 3 + rng.below(10);
    std::vector<int> a(len), b(len), c(len);
    for (int i = 0; i < len; ++i) {
      a[i] = rng.below(10);
      b[i] = rng.below(10);
      c[i] = rng.below(10);
    }
    const double ab = count_distance(a, b);
    const double ba = count_distance(b, a);
    const double ac = count_distance(a, c);
    const double cb = count_distance(c, b);
    CHECK(ab == ba);
    CHECK(ab >= 0.0);
    CHECK(count_distance(a, a) == 0.0);
    CHECK(ab <= ac + cb + 1e-12);
  }
  CHECK_THROWS_AS(count_distance({1, 2}, {1, 2, 3}), ValidationError);
}

TEST_CASE("silent parameters produce all-zero counts") {
  const auto layout = make_calibration_layout(5);
  const auto cfg = quick_config(100, 0.5, 1);
  // Tiny alpha with high thresholds and a floorless linkage: nothing fires.
  const Theta theta = {0.101, 0.99, 0.25, 0.85, 0.0, 0.2, 0.8, 0.9};
  CalibrationLayout high_t = layout;
  high_t.threshold_init = ThresholdConstant{0.95};
  const auto counts = simulate_counts(theta, cfg, high_t, 12);
  for (int c : counts) CHECK(c == 0);
}

TEST_CASE("reported point estimate produces a fluctuating series") {
  const auto layout = make_calibration_layout(5);
  const auto cfg = quick_config(100, 0.5, 1);
  const Theta theta = {0.569, 0.739, 0.52, 0.934, 0.532, 0.476, 0.452, 0.525};
  const auto counts = simulate_counts(theta, cfg, layout, 12);
  REQUIRE(counts.size() == 12);
  const int total = std::accumulate(counts.begin(), counts.end(), 0);
  CHECK(total > 0);
  CHECK(*std::max_element(counts.begin(), counts.end()) >
        *std::min_element(counts.begin(), counts.end()));
}

TEST_CASE("simulate_counts is deterministic") {
  const auto layout = make_calibration_layout(9);
  const auto cfg = quick_config(100, 0.5, 1);
  const auto a = simulate_counts(kInteriorTheta, cfg, layout, 12);
  const auto b = simulate_counts(kInteriorTheta, cfg, layout, 12);
  CHECK(a == b);
}

TEST_CASE("degenerate beliefs surface from the forward model") {
  const auto layout = make_calibration_layout(5);
  const auto cfg = quick_config(100, 0.5, 1);
  Theta theta = kInteriorTheta;
  theta[2] = theta[3] = 0.4;
  CHECK_THROWS_AS(simulate_counts(theta, cfg, layout, 12), DegenerateBeliefs);
}

TEST_CASE("abc rejects undersized draw budgets") {
  const auto layout = make_calibration_layout(5);
  const auto observed = series_from_counts({1, 0, 1, 1, 0, 1, 1, 0, 1, 1, 0, 1});
  CHECK_THROWS_AS(abc_fit(observed, quick_config(10, 0.2, 1), layout), TooFewAccepted);
}

TEST_CASE("abc with quantile one recovers the prior midpoint") {
  const auto layout = make_calibration_layout(5, 30, 4);
  const auto observed = series_from_counts({1, 0, 1, 1, 0, 1, 1, 0, 1, 1, 0, 1});
  const auto result = abc_fit(observed, quick_config(400, 1.0, 7), layout);
  CHECK(result.accepted_idx.size() >= 395);  // only degenerate draws drop out
  for (int c = 0; c < kThetaDim; ++c) {
    const double mid = result.posterior_mean[c];
    const double expected =
        0.5 * (PriorBox::defaults().bounds[c].first + PriorBox::defaults().bounds[c].second);
    CHECK(std::abs(mid - expected) < 0.1);
  }
}

TEST_CASE("posterior means stay inside the prior box and acceptance nests") {
  const auto layout = make_calibration_layout(11, 30, 4);
  const auto observed = series_from_counts({1, 1, 0, 1, 0, 1, 0, 0, 1, 1, 1, 0});
  const auto wide = abc_fit(observed, quick_config(600, 0.5, 3), layout);
  const auto narrow = abc_fit(observed, quick_config(600, 0.1, 3), layout);
  CHECK(wide.samples.size() == narrow.samples.size());
  CHECK(PriorBox::defaults().contains(wide.posterior_mean));
  CHECK(PriorBox::defaults().contains(narrow.posterior_mean));
  const std::set<std::size_t> wide_set(wide.accepted_idx.begin(), wide.accepted_idx.end());
  for (std::size_t idx : narrow.accepted_idx) CHECK(wide_set.count(idx) == 1);
  CHECK(narrow.accepted_idx.size() < wide.accepted_idx.size());
  CHECK(narrow.cutoff <= wide.cutoff);
}

TEST_CASE("abc is deterministic given the seed") {
  const auto layout = make_calibration_layout(13, 30, 4);
  const auto observed = series_from_counts({1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0});
  const auto a = abc_fit(observed, quick_config(300, 0.3, 11), layout);
  const auto b = abc_fit(observed, quick_config(300, 0.3, 11), layout, 1);
  CHECK(a.posterior_mean == b.posterior_mean);
  CHECK(a.accepted_idx == b.accepted_idx);
  CHECK(a.cutoff == b.cutoff);
}

TEST_CASE("short observed series are rejected at fit time") {
  const auto layout = make_calibration_layout(5);
  const auto observed = series_from_counts({1, 0, 1});
  CHECK_THROWS_AS(abc_fit(observed, quick_config(200, 0.5, 1), layout), ValidationError);
}

TEST_CASE("kde bandwidth degenerates on constant samples") {
  CHECK_THROWS_AS(Kde1D(std::vector<double>(100, 0.4), BandwidthRule::Silverman),
                  DegenerateBandwidth);
}

TEST_CASE("kde density of normal samples at the mode") {
  Rng rng(5);
  std::vector<double> samples(10000);
  for (double& s : samples) s = rng.normal();
  const Kde1D kde(samples, BandwidthRule::Silverman);
  CHECK(kde.density(0.0) == doctest::Approx(0.3989422804).epsilon(0.10));
}

TEST_CASE("kde density of uniform samples on the plateau") {
  Rng rng(9);
  std::vector<double> samples(10000);
  for (double& s : samples) s = rng.uniform01();
  const Kde1D kde(samples, BandwidthRule::Silverman);
  for (double x : {0.2, 0.35, 0.5, 0.65, 0.8})
    CHECK(kde.density(x) == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("kde integrates to one for interior sample sets") {
  Rng rng(13);
  std::vector<double> samples(4000);
  for (double& s : samples) s = 0.5 + 0.08 * rng.normal();
  const Kde1D kde(samples, BandwidthRule::Silverman);
  double integral = 0.0;
  const int grid = 2000;
  for (int i = 0; i <= grid; ++i) {
    const double x = static_cast<double>(i) / grid;
    const double w = (i == 0 || i == grid) ? 0.5 : 1.0;
    integral += w * kde.density(x) / grid;
  }
  CHECK(integral == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("scott and fixed bandwidth rules") {
  Rng rng(17);
  std::vector<double> samples(5000);
  for (double& s : samples) s = rng.normal(0.0, 0.2);
  const Kde1D scott(samples, BandwidthRule::Scott);
  CHECK(scott.bandwidth() == doctest::Approx(1.06 * 0.2 * std::pow(5000.0, -0.2)).epsilon(0.05));
  const Kde1D fixed(samples, BandwidthRule::Fixed, 0.03);
  CHECK(fixed.bandwidth() == 0.03);
}

TEST_CASE("mcmc chain mean matches the sample mean of the target") {
  Rng rng(21);
  std::vector<double> s1(4000), s2(4000);
  for (double& s : s1) s = rng.normal(0.3, 0.1);
  for (double& s : s2) s = rng.normal(0.7, 0.05);
  const double m1 = std::accumulate(s1.begin(), s1.end(), 0.0) / s1.size();
  const double m2 = std::accumulate(s2.begin(), s2.end(), 0.0) / s2.size();
  std::vector<Kde1D> factors;
  factors.emplace_back(s1, BandwidthRule::Silverman);
  factors.emplace_back(s2, BandwidthRule::Silverman);
  const ProductDensity density(std::move(factors));

  CalibrationConfig cfg;
  cfg.mcmc_chain_length = 30000;
  cfg.mcmc_burn_in = 5000;
  cfg.mcmc_proposal_scale = 1.0;
  cfg.seed = 2;
  const auto summary = mcmc_summarize(density, cfg, {0.5, 0.5});
  CHECK(summary.mean[0] == doctest::Approx(m1).epsilon(0.05));
  CHECK(summary.mean[1] == doctest::Approx(m2).epsilon(0.05));
  CHECK(summary.acceptance_rate > 0.05);
  CHECK(summary.lo90[0] < summary.mean[0]);
  CHECK(summary.hi90[0] > summary.mean[0]);
}

TEST_CASE("mcmc with a dead proposal throws") {
  Rng rng(23);
  std::vector<double> s(500);
  for (double& v : s) v = rng.uniform01();
  std::vector<Kde1D> factors;
  factors.emplace_back(s, BandwidthRule::Silverman);
  const ProductDensity density(std::move(factors));
  CalibrationConfig cfg;
  cfg.mcmc_proposal_scale = 0.0;
  CHECK_THROWS_AS(mcmc_summarize(density, cfg, {0.5}), ChainStuck);
}

TEST_CASE("mcmc mean agrees with the direct accepted-draw mean") {
  const auto layout = make_calibration_layout(31, 30, 4);
  const auto observed = series_from_counts({1, 1, 0, 1, 0, 1, 1, 0, 1, 0, 1, 1});
  auto cfg = quick_config(800, 0.2, 19);
  const auto abc = abc_fit(observed, cfg, layout);
  const auto density = kde_density(abc, cfg);
  cfg.mcmc_chain_length = 30000;
  cfg.mcmc_burn_in = 5000;
  const std::vector<double> start(abc.posterior_mean.begin(), abc.posterior_mean.end());
  const auto summary = mcmc_summarize(density, cfg, start);
  for (int c = 0; c < kThetaDim; ++c)
    CHECK(summary.mean[c] == doctest::Approx(abc.posterior_mean[c]).epsilon(0.06));
}
