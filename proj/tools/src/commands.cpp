#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "synchrony/analysis.hpp"
#include "synchrony/calibrate.hpp"
#include "synchrony/config.hpp"
#include "synchrony/csv.hpp"
#include "synchrony/recipes.hpp"
#include "synchrony/svg.hpp"
#include "synchrony/sweep.hpp"
#include "synchrony/version.hpp"

namespace synchrony::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class ManifestWriter {
 public:
  ManifestWriter(std::string subcommand, const fs::path& out_dir)
      : out_dir_(out_dir), start_(std::chrono::steady_clock::now()) {
    doc_["schema"] = "synchrony-manifest/1";
    doc_["subcommand"] = std::move(subcommand);
    doc_["code_version"] = kVersion;
  }

  void set_seed(std::uint64_t seed) { doc_["seed"] = seed; }
  void set_config(const std::string& path, const std::string& text) {
    doc_["config_path"] = path;
    doc_["config_text"] = text;
  }
  void set(const std::string& key, const json& value) { doc_[key] = value; }

  void add_output(const fs::path& rel, const std::string& content) {
    write_file(out_dir_ / rel, content);
    outputs_.push_back(rel.generic_string());
  }

  void finish() {
    doc_["outputs"] = outputs_;
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    doc_["duration_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    write_file(out_dir_ / "manifest.json", doc_.dump(2) + "\n");
  }

 private:
  fs::path out_dir_;
  json doc_;
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point start_;
};

// Resolves the run description either from --config or from a previously
// written manifest (which embeds the config text and the resolved seed).
struct RunSource {
  ParsedConfig config;
  std::string config_path;
  std::optional<std::uint64_t> manifest_seed;
};

RunSource resolve_source(const CommonArgs& args) {
  if (!args.from_manifest.empty()) {
    const json doc = json::parse(read_file(args.from_manifest));
    RunSource src{ParsedConfig::from_text(doc.at("config_text").get<std::string>(),
                                          args.from_manifest + " (embedded config)"),
                  doc.value("config_path", std::string{}), doc.at("seed").get<std::uint64_t>()};
    return src;
  }
  if (args.config_path.empty()) throw ConfigError("no --config or --from-manifest given");
  return {ParsedConfig::from_file(args.config_path), args.config_path, std::nullopt};
}

std::string snapshot_name(int t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snapshots/t%04d.svg", t);
  return buf;
}

}  // namespace

int cmd_simulate(const CommonArgs& args) {
  RunSource src = resolve_source(args);
  std::optional<std::uint64_t> seed = args.seed;
  if (!seed && src.manifest_seed) seed = src.manifest_seed;

  const SimulateSetup setup = build_simulate_setup(src.config, seed);
  ManifestWriter manifest("simulate", args.out_dir);
  manifest.set_seed(setup.seed);
  manifest.set_config(src.config_path, src.config.text());

  const Trajectory traj =
      run(setup.graph, setup.sim, setup.driver, setup.horizon, setup.schedule, true);
  const SyncReport sync = detect_sync(traj);

  manifest.add_output("trajectory.csv", trajectory_to_csv(traj));
  manifest.add_output("summary.csv", summary_to_csv(traj));
  manifest.add_output("graph.txt", to_edge_list(setup.graph));

  LineChartOptions pro_opts;
  pro_opts.title = "Global action ratio";
  pro_opts.y_label = "Pro(t)";
  manifest.add_output("pro.svg", line_chart_svg({{"Pro(t)", traj.pro, ""}}, pro_opts));
  LineChartOptions dev_opts;
  dev_opts.title = "Threshold spread";
  dev_opts.y_label = "Total deviation";
  manifest.add_output("total_deviation.svg",
                      line_chart_svg({{"Total deviation", traj.total_deviation, ""}}, dev_opts));

  if (setup.snapshot_every > 0) {
    for (int t = 0; t < static_cast<int>(traj.states.size()); t += setup.snapshot_every) {
      SnapshotOptions snap;
      snap.title = "t = " + std::to_string(t);
      manifest.add_output(snapshot_name(t),
                          network_snapshot_svg(setup.graph, traj.states[t], snap));
    }
  }

  json extras;
  extras["action_sync_tick"] = sync.action_sync_tick ? json(*sync.action_sync_tick) : json();
  extras["threshold_sync_tick"] =
      sync.threshold_sync_tick ? json(*sync.threshold_sync_tick) : json();
  extras["final_pro"] = traj.pro.back();
  manifest.set("result", extras);
  manifest.finish();

  if (!args.quiet) {
    std::cout << "simulate: horizon " << setup.horizon << ", final Pro "
              << csv::num(traj.pro.back());
    if (sync.action_sync_tick) std::cout << ", action sync at t=" << *sync.action_sync_tick;
    std::cout << "\n";
  }
  return 0;
}

int cmd_sweep(const CommonArgs& args) {
  RunSource src = resolve_source(args);
  std::optional<std::uint64_t> seed = args.seed;
  if (!seed && src.manifest_seed) seed = src.manifest_seed;

  const SweepSpec spec = build_sweep_spec(src.config, seed);
  ManifestWriter manifest("sweep", args.out_dir);
  manifest.set_seed(spec.seed);
  manifest.set_config(src.config_path, src.config.text());

  const SweepResult result = run_sweep(spec);
  manifest.add_output("results.csv", sweep_to_csv(result));

  for (const auto& axis : spec.axes) {
    const auto aggregates = summarize(spec, result, axis.name);
    manifest.add_output("summary_" + axis.name + ".csv",
                        summary_to_csv(aggregates, axis.name));
    if (axis.name != "d") continue;
    // Degree sweeps also get the phase-transition readout: a cell counts as
    // synchronizing when at least half its replicates reach full
    // participation.
    std::map<double, bool> outcomes;
    for (const auto& agg : aggregates) outcomes[agg.value] = agg.sync_rate >= 0.5;
    json doc;
    try {
      const PhaseTransition transition = find_phase_transition(outcomes);
      doc["transition"] = true;
      for (const auto& flip : transition.flips)
        doc["flips"].push_back(
            {{"d_lo", flip.d_lo}, {"d_hi", flip.d_hi}, {"to_sync", flip.to_sync}});
      if (transition.window) {
        doc["window"] = {{"onset", {transition.window->first.d_lo, transition.window->first.d_hi}},
                         {"decay",
                          {transition.window->second.d_lo, transition.window->second.d_hi}}};
      }
    } catch (const NoTransition& e) {
      doc["transition"] = false;
      doc["reason"] = e.what();
    }
    manifest.add_output("phase_transition.json", doc.dump(2) + "\n");
  }

  // Grouped Pro(t) lines along the first axis: mean trace per axis value.
  const std::string& axis0 = spec.axes.front().name;
  std::map<double, std::pair<std::vector<double>, int>> traces;
  for (const auto& row : result.rows) {
    if (row.error || row.pro_trace.empty()) continue;
    auto& [sum, count] = traces[row.cell[0]];
    if (sum.empty()) sum.assign(row.pro_trace.size(), 0.0);
    for (std::size_t t = 0; t < row.pro_trace.size(); ++t) sum[t] += row.pro_trace[t];
    ++count;
  }
  std::vector<LineSeries> series;
  for (auto& [value, trace] : traces) {
    auto& [sum, count] = trace;
    for (double& v : sum) v /= count;
    series.push_back({axis0 + " = " + csv::num(value), sum, ""});
  }
  LineChartOptions opts;
  opts.title = "Mean Pro(t) by " + axis0;
  opts.y_label = "Pro(t)";
  manifest.add_output("pro_by_" + axis0 + ".svg", line_chart_svg(series, opts));
  manifest.finish();

  if (!args.quiet)
    std::cout << "sweep: " << result.rows.size() << " runs across " << spec.axes.size()
              << " axes\n";
  return 0;
}

namespace {

int verify_lemma2_suite(ManifestWriter& manifest, bool quiet) {
  Lemma2GridSpec spec;
  const auto entries = run_lemma2_grid(spec);
  std::ostringstream summary;
  summary << "n,k,draw,premise,conclusion,discrepancy,sync_tick\n";
  int discrepancies = 0;
  for (const auto& entry : entries) {
    summary << entry.n << ',' << entry.k << ',' << entry.draw << ',' << entry.cert.premise
            << ',' << entry.cert.conclusion << ',' << entry.cert.discrepancy << ',';
    if (entry.cert.sync_tick) summary << *entry.cert.sync_tick;
    summary << '\n';
    if (entry.cert.discrepancy) {
      ++discrepancies;
      manifest.add_output("certs/lemma2_n" + std::to_string(entry.n) + "_k" +
                              std::to_string(entry.k) + "_draw" + std::to_string(entry.draw) +
                              ".json",
                          to_json(entry.cert));
    }
  }
  manifest.add_output("summary.csv", summary.str());
  manifest.set("discrepancies", discrepancies);
  if (!quiet) {
    std::cout << "lemma2 grid: " << entries.size() << " certificates, " << discrepancies
              << " premise-true/conclusion-false\n";
    if (discrepancies > 0)
      std::cout << "  counterexample certificates written under certs/ (bipartite rings:"
                   " a lone seed's neighborhood spread alternates sides and never covers"
                   " the whole cycle)\n";
  }
  return 0;
}

int verify_theorem1_suite(ManifestWriter& manifest, bool quiet) {
  const Theorem1GridReport report = run_theorem1_grid(6, 4, 200);
  json doc;
  doc["n"] = report.n;
  doc["k"] = report.k;
  doc["grid_points"] = report.points;
  doc["premise_true"] = report.premise_true;
  doc["discrepancies"] = report.discrepancies;
  manifest.add_output("theorem1_grid.json", doc.dump(2) + "\n");
  for (std::size_t i = 0; i < report.premise_true_certs.size(); ++i)
    manifest.add_output("certs/theorem1_" + std::to_string(i) + ".json",
                        to_json(report.premise_true_certs[i]));
  manifest.set("premise_true", report.premise_true);
  if (!quiet) {
    std::cout << "theorem1 grid at (n=6, k=4): " << report.points << " parameter points, "
              << report.premise_true << " premise-true, " << report.discrepancies
              << " discrepancies\n";
    if (report.premise_true == 0)
      std::cout << "  note: the two odds premises need both raw willingness values above"
                   " k/(k+1), but they always carry opposite signs, so the premise set"
                   " is empty\n";
  }
  return 0;
}

int verify_theorem2_suite(ManifestWriter& manifest, bool quiet) {
  std::ostringstream table;
  table << "period,phase,seed,complete_waves,total_waves,mean_peak_pro,coordination_dev\n";
  for (double period : {6.0, 16.0}) {
    for (bool peak : {true, false}) {
      for (int seed = 0; seed < 10; ++seed) {
        const CycleSetup setup = make_cycle_setup(period, peak, seed);
        const Theorem2Certificate cert =
            verify_theorem2(setup.driver, setup.schedule, setup.graph, setup.config,
                            setup.horizon);
        table << period << ',' << (peak ? "peak" : "trough") << ',' << seed << ','
              << cert.complete_waves << ',' << cert.total_waves << ','
              << csv::num(cert.mean_peak_pro) << ',' << csv::num(cert.coordination_dev) << '\n';
        if (seed == 0)
          manifest.add_output("certs/theorem2_T" + std::to_string(static_cast<int>(period)) +
                                  (peak ? "_peak" : "_trough") + ".json",
                              to_json(cert));
      }
    }
  }
  manifest.add_output("comparison.csv", table.str());
  if (!quiet) std::cout << "theorem2: wrote peak-vs-trough comparison for periods 6 and 16\n";
  return 0;
}

}  // namespace

int cmd_verify(const std::string& suite, const CommonArgs& args) {
  if (suite != "lemma2" && suite != "theorem1" && suite != "theorem2")
    throw ConfigError("unknown verify suite '" + suite + "' (lemma2 | theorem1 | theorem2)");
  ManifestWriter manifest("verify", args.out_dir);
  manifest.set_seed(args.seed.value_or(0));
  manifest.set("suite", suite);
  int rc = 0;
  if (suite == "lemma2") rc = verify_lemma2_suite(manifest, args.quiet);
  if (suite == "theorem1") rc = verify_theorem1_suite(manifest, args.quiet);
  if (suite == "theorem2") rc = verify_theorem2_suite(manifest, args.quiet);
  manifest.finish();
  return rc;
}

int cmd_calibrate(const std::string& series_path, const CommonArgs& args) {
  RunSource src = resolve_source(args);
  std::optional<std::uint64_t> seed = args.seed;
  if (!seed && src.manifest_seed) seed = src.manifest_seed;

  const ObservedSeries observed = load_series(series_path);
  CalibrationSetup setup = build_calibration_setup(src.config, seed);

  ManifestWriter manifest("calibrate", args.out_dir);
  manifest.set_seed(setup.config.seed);
  manifest.set_config(src.config_path, src.config.text());
  manifest.set("series_path", series_path);

  const AbcResult abc = abc_fit(observed, setup.config, setup.layout);

  std::ostringstream accepted;
  for (int c = 0; c < kThetaDim; ++c) accepted << kThetaNames[c] << ',';
  accepted << "distance\n";
  for (std::size_t idx : abc.accepted_idx) {
    const auto& sample = abc.samples[idx];
    for (int c = 0; c < kThetaDim; ++c) accepted << csv::num(sample.theta[c]) << ',';
    accepted << csv::num(sample.distance) << '\n';
  }
  manifest.add_output("accepted.csv", accepted.str());

  const ProductDensity density = kde_density(abc, setup.config);
  std::vector<double> start(abc.posterior_mean.begin(), abc.posterior_mean.end());
  const McmcSummary mcmc = mcmc_summarize(density, setup.config, start);

  json posterior;
  posterior["accepted"] = abc.accepted_idx.size();
  posterior["cutoff_distance"] = abc.cutoff;
  posterior["mcmc_acceptance_rate"] = mcmc.acceptance_rate;
  for (int c = 0; c < kThetaDim; ++c) {
    posterior["abc_mean"][kThetaNames[c]] = abc.posterior_mean[c];
    posterior["mcmc_mean"][kThetaNames[c]] = mcmc.mean[c];
    posterior["interval90"][kThetaNames[c]] = {mcmc.lo90[c], mcmc.hi90[c]};
    posterior["prior"][kThetaNames[c]] = {setup.config.priors.bounds[c].first,
                                          setup.config.priors.bounds[c].second};
  }
  posterior["config"] = {{"n_draws", setup.config.n_draws},
                         {"tolerance_quantile", setup.config.tolerance_quantile},
                         {"month_len", setup.config.month_len},
                         {"event_pro_threshold", setup.config.event_pro_threshold}};
  manifest.add_output("posterior.json", posterior.dump(2) + "\n");

  // Observed vs simulated-at-posterior-mean overlay.
  const std::vector<int> fitted =
      simulate_counts(abc.posterior_mean, setup.config, setup.layout, observed.size());
  std::ostringstream overlay;
  overlay << "month,observed,simulated\n";
  for (int i = 0; i < observed.size(); ++i)
    overlay << observed.months[i] << ',' << observed.counts[i] << ',' << fitted[i] << '\n';
  manifest.add_output("overlay.csv", overlay.str());

  std::vector<double> obs_line(observed.counts.begin(), observed.counts.end());
  std::vector<double> fit_line(fitted.begin(), fitted.end());
  LineChartOptions opts;
  opts.title = "Monthly collective-action events";
  opts.x_label = "month";
  opts.y_label = "events";
  manifest.add_output("overlay.svg", line_chart_svg({{"observed", obs_line, "#e6b422"},
                                                     {"simulated", fit_line, "#1f77b4"}},
                                                    opts));
  manifest.finish();

  if (!args.quiet) {
    std::cout << "calibrate: accepted " << abc.accepted_idx.size() << "/"
              << setup.config.n_draws << " draws, cutoff " << csv::num(abc.cutoff) << "\n";
    for (int c = 0; c < kThetaDim; ++c)
      std::cout << "  " << kThetaNames[c] << ": abc " << csv::num(abc.posterior_mean[c])
                << ", mcmc " << csv::num(mcmc.mean[c]) << " [" << csv::num(mcmc.lo90[c]) << ", "
                << csv::num(mcmc.hi90[c]) << "]\n";
  }
  return 0;
}

int cmd_gen_network(const GenNetworkArgs& args) {
  ManifestWriter manifest("gen-network", args.out_dir);
  manifest.set_seed(args.seed);

  Graph graph;
  if (args.kind == "ring") {
    graph = make_regular_ring(args.n, args.d);
  } else if (args.kind == "small-world") {
    graph = make_small_world(NetworkSpec{args.n, args.d, args.p_rewire, args.seed});
  } else {
    throw ConfigError("unknown network kind '" + args.kind + "' (ring | small-world)");
  }
  manifest.add_output("edges.txt", to_edge_list(graph));
  json info;
  info["n"] = graph.n;
  info["edges"] = graph.edge_count();
  info["mean_degree"] = graph.mean_degree();
  info["connected"] = graph.connected;
  manifest.set("graph", info);
  manifest.finish();

  if (!args.quiet)
    std::cout << "gen-network: " << graph.n << " nodes, " << graph.edge_count() << " edges\n";
  return 0;
}

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidDegree& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SelfLoopError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DuplicateEdgeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NegativeCount& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const BadInitialActors& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const EmptySchedule& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnknownAxis& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace synchrony::cli
