// eegflow command line: stage-by-stage entry points plus the single-command
// end-to-end `run`. Exit codes: 0 success, 2 config error, 3 data error,
// 4 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "eegflow/io.hpp"
#include "eegflow/manifold_graph.hpp"
#include "eegflow/pipeline.hpp"
#include "eegflow/rng.hpp"
#include "eegflow/spectral.hpp"

namespace ef = eegflow;
namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

ef::pipeline::PipelineConfig load_or_default(const std::string& config_path) {
  if (config_path.empty()) return {};
  return ef::pipeline::load_config(config_path);
}

std::vector<ef::sig::SignalRecord> read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ef::IoError("cannot open records file " + path);
  std::vector<ef::sig::SignalRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    records.push_back(ef::sig::parse_record_line(line, line_no).record);
  }
  return records;
}

int dispatch(CLI::App& app) {
  // ---- run ------------------------------------------------------------------
  auto* run = app.add_subcommand("run", "execute the full pipeline");
  std::string run_config, run_out, run_seed;
  bool run_resume = false;
  run->add_option("--config", run_config, "pipeline config JSON");
  run->add_option("--out", run_out, "output directory override");
  run->add_option("--seed", run_seed, "master seed override");
  run->add_flag("--resume", run_resume, "reuse intact stage artifacts");
  run->callback([&] {
    auto config = load_or_default(run_config);
    if (!run_out.empty()) config.out_dir = run_out;
    if (!run_seed.empty()) config.seed = std::stoull(run_seed);
    const auto report = ef::pipeline::run_pipeline(config, run_resume);
    std::printf("report_hash %s\n", report.report_hash.c_str());
    std::printf("accuracy %.6f f1 %.6f auroc %.6f sensitivity %.6f "
                "specificity %.6f\n",
                report.metrics.accuracy, report.metrics.f1,
                report.metrics.auroc, report.metrics.sensitivity,
                report.metrics.specificity);
    for (const auto& s : report.stages)
      std::printf("stage %-12s %8.3fs%s\n", s.name.c_str(), s.seconds,
                  s.resumed ? " (resumed)" : "");
  });

  // ---- synth ----------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "generate synthetic epochs");
  std::string synth_config, synth_out = "out/epochs";
  std::size_t synth_n = 1000;
  std::uint64_t synth_seed = 42;
  synth->add_option("--config", synth_config);
  synth->add_option("--n", synth_n, "epoch count (half per class)");
  synth->add_option("--out", synth_out);
  synth->add_option("--seed", synth_seed);
  synth->callback([&] {
    auto config = load_or_default(synth_config);
    ef::sig::SynthOptions opts;
    opts.channels = config.channels;
    opts.sample_rate_hz = config.sample_rate_hz;
    std::vector<ef::sig::MultiChannelEpoch> epochs;
    const std::uint64_t base = ef::Rng::mix(synth_seed, 0x73796e);
    for (std::size_t i = 0; i < synth_n; ++i) {
      const auto cls = i < synth_n / 2 ? ef::sig::SynthClass::A
                                       : ef::sig::SynthClass::B;
      auto e = ef::sig::synth_epoch(cls, ef::Rng::mix(base, i), config.n, opts);
      e.event_id = std::int64_t(i);
      epochs.push_back(std::move(e));
    }
    ef::io::save_epoch_store(synth_out, epochs,
                             "synthetic n=" + std::to_string(synth_n));
    std::printf("wrote %zu epochs to %s\n", epochs.size(), synth_out.c_str());
  });

  // ---- ingest ----------------------------------------------------------------
  auto* ingest = app.add_subcommand("ingest", "parse records into an epoch store");
  std::string ing_config, ing_records, ing_out = "out/epochs";
  ingest->add_option("--config", ing_config);
  ingest->add_option("--records", ing_records)->required();
  ingest->add_option("--out", ing_out);
  ingest->callback([&] {
    auto config = load_or_default(ing_config);
    const auto records = read_records(ing_records);
    ef::sig::AssembleOptions opts;
    opts.channels = config.channels;
    opts.aliases = config.aliases;
    ef::sig::AssembleStats stats;
    const auto epochs = ef::sig::assemble_epochs(records, config.n, opts, &stats);
    ef::io::save_epoch_store(ing_out, epochs, "records=" + ing_records);
    std::printf("epochs %zu dropped_missing %zu dropped_invalid %zu "
                "duplicates %zu\n",
                stats.epochs, stats.dropped_missing_channel,
                stats.dropped_invalid_label, stats.duplicate_records);
  });

  // ---- mix -------------------------------------------------------------------
  auto* mix = app.add_subcommand("mix", "mix clean and noise stores at a target SNR");
  std::string mix_clean, mix_noise, mix_out = "out/mixed";
  double mix_snr = 0.0;
  mix->add_option("--clean", mix_clean)->required();
  mix->add_option("--noise", mix_noise)->required();
  mix->add_option("--snr-db", mix_snr)->required();
  mix->add_option("--out", mix_out);
  mix->callback([&] {
    const auto clean = ef::io::load_epoch_store(mix_clean).epochs;
    const auto noise = ef::io::load_epoch_store(mix_noise).epochs;
    if (clean.size() != noise.size())
      throw ef::IoError("mix: store sizes differ");
    std::vector<ef::sig::MultiChannelEpoch> mixed = clean;
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < clean.size(); ++i) {
      for (std::size_t c = 0; c < clean[i].channels.size(); ++c) {
        auto m = ef::sig::mix_at_snr(clean[i].channels[c],
                                     noise[i].channels[c], mix_snr);
        std::vector<double> scaled(noise[i].channels[c].size());
        for (std::size_t t = 0; t < scaled.size(); ++t)
          scaled[t] = m.lambda * noise[i].channels[c][t];
        rows.push_back({{"event_id", clean[i].event_id},
                        {"channel", clean[i].channel_names[c]},
                        {"lambda", m.lambda},
                        {"measured_snr_db",
                         ef::sig::measure_snr(clean[i].channels[c], scaled)}});
        mixed[i].channels[c] = std::move(m.mixed);
      }
    }
    ef::io::save_epoch_store(mix_out, mixed,
                             "mixed snr_db=" + std::to_string(mix_snr));
    ordered_json manifest;
    manifest["schema"] = "eegflow.mix/1";
    manifest["snr_db"] = mix_snr;
    manifest["rows"] = std::move(rows);
    ef::io::write_text_file(fs::path(mix_out) / "mix.json",
                            manifest.dump(2) + "\n");
    std::printf("wrote %zu mixed epochs to %s\n", mixed.size(),
                mix_out.c_str());
  });

  // ---- reduce ----------------------------------------------------------------
  auto* reduce = app.add_subcommand(
      "reduce", "denoiser hook + spectra + eigenmap reduction");
  std::string red_config, red_epochs, red_out = "out/reduced";
  reduce->add_option("--config", red_config);
  reduce->add_option("--epochs", red_epochs)->required();
  reduce->add_option("--out", red_out);
  reduce->callback([&] {
    auto config = load_or_default(red_config);
    const auto epochs = ef::io::load_epoch_store(red_epochs).epochs;
    ef::pipeline::DenoiserSpec spec{config.denoiser, config.band_lo_hz,
                                    config.band_hi_hz};
    ef::spectral::EigsOptions eigs;
    eigs.seed = ef::Rng::mix(config.seed, 0x656967);
    const ef::spectral::JointEigenmap eigenmap(config.channels, config.pairs,
                                               config.n, config.d_out, eigs);
    std::vector<ef::spectral::ReducedSample> reduced;
    for (const auto& e : epochs)
      reduced.push_back(ef::spectral::reduce_epoch(
          ef::pipeline::denoiser_hook(e, spec, config.sample_rate_hz),
          eigenmap, config.sample_rate_hz));
    ef::io::save_reduced_store(red_out, reduced);
    std::printf("wrote %zu reduced samples to %s\n", reduced.size(),
                red_out.c_str());
  });

  // ---- graph -----------------------------------------------------------------
  auto* graph_cmd = app.add_subcommand("graph", "build per-sample subgraphs");
  std::string g_config, g_reduced, g_out = "out/graphs/subgraphs.jsonl";
  graph_cmd->add_option("--config", g_config);
  graph_cmd->add_option("--reduced", g_reduced)->required();
  graph_cmd->add_option("--out", g_out);
  graph_cmd->callback([&] {
    auto config = load_or_default(g_config);
    const auto reduced = ef::io::load_reduced_store(g_reduced);
    ef::graph::MetricOptions metric;
    metric.normalize_mixed = config.normalize_mixed;
    metric.spectrum_length = config.n;
    std::vector<ef::io::SubgraphRecord> records;
    for (const auto& s : reduced)
      records.push_back(
          {s.event_id, s.label, ef::graph::build_subgraph(s, metric)});
    ef::io::save_subgraphs(g_out, records);
    std::printf("wrote %zu subgraphs to %s\n", records.size(), g_out.c_str());
  });

  // ---- flow ------------------------------------------------------------------
  auto* flow_cmd = app.add_subcommand("flow", "Ricci flow evolution + edge cut");
  std::string f_config, f_graphs, f_out = "out/flow";
  flow_cmd->add_option("--config", f_config);
  flow_cmd->add_option("--graphs", f_graphs)->required();
  flow_cmd->add_option("--out", f_out);
  flow_cmd->callback([&] {
    auto config = load_or_default(f_config);
    const auto records = ef::io::load_subgraphs(f_graphs);
    ef::ricci::FlowOptions opts;
    opts.alpha = config.alpha;
    opts.idleness = config.idleness;
    opts.iterations = config.flow_iterations;
    std::vector<ef::io::TrajectoryRecord> trajectories;
    std::vector<ef::io::SubgraphRecord> post_cut;
    for (const auto& r : records) {
      auto t = ef::ricci::evolve(r.graph, opts);
      post_cut.push_back(
          {r.event_id, r.label,
           ef::ricci::cut_edges(ef::ricci::final_state(r.graph, t),
                                config.cut_ratio)});
      trajectories.push_back({r.event_id, std::move(t)});
    }
    ef::io::save_trajectories(fs::path(f_out) / "trajectories.jsonl",
                              trajectories);
    ef::io::save_subgraphs(fs::path(f_out) / "post_cut.jsonl", post_cut);
    std::printf("evolved %zu subgraphs into %s\n", trajectories.size(),
                f_out.c_str());
  });

  // ---- aggregate -------------------------------------------------------------
  auto* agg = app.add_subcommand("aggregate", "composite adjacency");
  std::string a_config, a_flow, a_out = "out/aggregate", a_graphs;
  std::string a_mode = "over-subgraphs";
  agg->add_option("--config", a_config);
  agg->add_option("--flow", a_flow, "flow output directory")->required();
  agg->add_option("--graphs", a_graphs,
                  "initial subgraphs (needed for over-iterations)");
  agg->add_option("--mode", a_mode)->check(
      CLI::IsMember({"over-subgraphs", "over-iterations"}));
  agg->add_option("--out", a_out);
  agg->callback([&] {
    auto config = load_or_default(a_config);
    std::vector<ef::graph::WeightedSubgraph> sources;
    ef::ricci::AggregationMode mode;
    if (a_mode == "over-subgraphs") {
      mode = ef::ricci::AggregationMode::over_subgraphs;
      for (const auto& r :
           ef::io::load_subgraphs(fs::path(a_flow) / "post_cut.jsonl"))
        sources.push_back(r.graph);
    } else {
      mode = ef::ricci::AggregationMode::over_iterations;
      if (a_graphs.empty())
        throw ef::ConfigError("aggregate: --graphs required for "
                              "over-iterations mode");
      const auto graphs = ef::io::load_subgraphs(a_graphs);
      const auto trajectories =
          ef::io::load_trajectories(fs::path(a_flow) / "trajectories.jsonl");
      if (graphs.size() != trajectories.size())
        throw ef::IoError("aggregate: graphs/trajectories size mismatch");
      for (std::size_t i = 0; i < graphs.size(); ++i) {
        auto snaps = ef::ricci::iteration_graphs(graphs[i].graph,
                                                 trajectories[i].trajectory);
        sources.insert(sources.end(), std::make_move_iterator(snaps.begin()),
                       std::make_move_iterator(snaps.end()));
      }
    }
    const auto composite = ef::ricci::aggregate_adjacency(sources, mode);
    ef::io::save_composite(fs::path(a_out) / "composite.csv",
                           fs::path(a_out) / "composite.json", composite,
                           {config.alpha, config.cut_ratio});
    std::printf("aggregated %zu sources into %s\n", composite.source_count,
                a_out.c_str());
  });

  // ---- train-gcn ---------------------------------------------------------------
  auto* tg = app.add_subcommand("train-gcn", "distance-preserving GCN training");
  std::string tg_config, tg_reduced, tg_agg, tg_out = "out/gcn";
  tg->add_option("--config", tg_config);
  tg->add_option("--reduced", tg_reduced)->required();
  tg->add_option("--aggregate", tg_agg, "aggregate output directory")
      ->required();
  tg->add_option("--out", tg_out);
  tg->callback([&] {
    auto config = load_or_default(tg_config);
    const auto reduced = ef::io::load_reduced_store(tg_reduced);
    const auto composite =
        ef::io::load_composite(fs::path(tg_agg) / "composite.csv",
                               fs::path(tg_agg) / "composite.json");
    std::vector<Eigen::MatrixXd> features;
    for (const auto& s : reduced) features.push_back(s.matrix());
    double feature_scale = 0.0;
    for (const auto& x : features) feature_scale += x.norm();
    feature_scale /= double(features.size());
    if (feature_scale <= 0.0) feature_scale = 1.0;
    for (auto& x : features) x /= feature_scale;
    auto cfg = config.gcn;
    if (!cfg.seed) cfg.seed = ef::Rng::mix(config.seed, 0x67636e);
    const auto result = ef::gcn::train_gcn(features, composite.matrix, cfg);
    ef::io::save_gcn_checkpoint(fs::path(tg_out) / "checkpoint.json",
                                result.params, cfg, feature_scale);
    std::ostringstream curve;
    curve << "epoch,loss\n";
    for (std::size_t e = 0; e < result.loss_curve.size(); ++e)
      curve << e << ',' << result.loss_curve[e] << '\n';
    ef::io::write_text_file(fs::path(tg_out) / "loss_curve.csv", curve.str());
    std::printf("final loss %.6f -> %s\n", result.loss_curve.back(),
                tg_out.c_str());
  });

  // ---- embed ---------------------------------------------------------------------
  auto* em = app.add_subcommand("embed", "produce embedding vectors");
  std::string em_reduced, em_agg, em_params, em_out = "out/embeddings/embeddings.csv";
  em->add_option("--reduced", em_reduced)->required();
  em->add_option("--aggregate", em_agg)->required();
  em->add_option("--params", em_params)->required();
  em->add_option("--out", em_out);
  em->callback([&] {
    const auto reduced = ef::io::load_reduced_store(em_reduced);
    const auto composite =
        ef::io::load_composite(fs::path(em_agg) / "composite.csv",
                               fs::path(em_agg) / "composite.json");
    const auto checkpoint = ef::io::load_gcn_checkpoint(em_params);
    std::vector<ef::io::EmbeddingRow> rows;
    for (const auto& s : reduced)
      rows.push_back(
          {s.event_id, s.label,
           ef::gcn::embed(checkpoint.params, composite.matrix,
                          s.matrix() / checkpoint.feature_scale)});
    ef::io::save_embeddings_csv(em_out, rows);
    std::printf("wrote %zu embeddings to %s\n", rows.size(), em_out.c_str());
  });

  // ---- train-clf --------------------------------------------------------------------
  auto* tc = app.add_subcommand("train-clf", "train the 1D CNN classifier");
  std::string tc_config, tc_embeddings, tc_out = "out/clf";
  tc->add_option("--config", tc_config);
  tc->add_option("--embeddings", tc_embeddings)->required();
  tc->add_option("--out", tc_out);
  tc->callback([&] {
    auto config = load_or_default(tc_config);
    const auto rows = ef::io::load_embeddings_csv(tc_embeddings);
    std::vector<Eigen::VectorXd> z;
    std::vector<int> y;
    for (const auto& r : rows) {
      z.push_back(r.values);
      y.push_back(r.label.is_digit() ? 1 : 0);
    }
    auto cfg = config.clf;
    if (!cfg.seed) cfg.seed = ef::Rng::mix(config.seed, 0x636c66);
    auto arch = config.cnn_arch;
    arch.input_dim = std::size_t(rows.front().values.size());
    const auto result = ef::clf::train_cnn(z, y, cfg, arch);
    ef::io::save_cnn_checkpoint(fs::path(tc_out) / "checkpoint.json",
                                result.params, cfg);
    std::ostringstream curve;
    curve << "epoch,loss\n";
    for (std::size_t e = 0; e < result.loss_curve.size(); ++e)
      curve << e << ',' << result.loss_curve[e] << '\n';
    ef::io::write_text_file(fs::path(tc_out) / "loss_curve.csv", curve.str());
    std::printf("final loss %.6f -> %s\n", result.loss_curve.back(),
                tc_out.c_str());
  });

  // ---- eval --------------------------------------------------------------------------
  auto* ev = app.add_subcommand("eval", "score embeddings and report metrics");
  std::string ev_config, ev_embeddings, ev_params, ev_out = "out/report";
  ev->add_option("--config", ev_config);
  ev->add_option("--embeddings", ev_embeddings)->required();
  ev->add_option("--params", ev_params)->required();
  ev->add_option("--out", ev_out);
  ev->callback([&] {
    auto config = load_or_default(ev_config);
    const auto rows = ef::io::load_embeddings_csv(ev_embeddings);
    const auto params = ef::io::load_cnn_checkpoint(ev_params);
    std::vector<double> scores;
    std::vector<int> labels;
    std::vector<ef::io::ScoreRow> out_rows;
    for (const auto& r : rows) {
      const double p = ef::clf::cnn_forward(params, r.values);
      const int y = r.label.is_digit() ? 1 : 0;
      scores.push_back(p);
      labels.push_back(y);
      out_rows.push_back({r.event_id, y, p});
    }
    auto metrics = ef::clf::evaluate(scores, labels);
    const std::uint64_t boot = ef::Rng::mix(config.seed, 0x6369);
    std::size_t idx = 0;
    for (const auto* name :
         {"accuracy", "f1", "auroc", "sensitivity", "specificity"})
      metrics.ci[name] =
          ef::clf::bootstrap_ci(name, scores, labels,
                                config.bootstrap_resamples, config.ci_level,
                                ef::Rng::mix(boot, idx++));
    ef::io::save_metrics_json(fs::path(ev_out) / "metrics.json", metrics);
    ef::io::save_scores_csv(fs::path(ev_out) / "scores.csv", out_rows);
    std::printf("accuracy %.4f f1 %.4f auroc %.4f\n", metrics.accuracy,
                metrics.f1, metrics.auroc);
  });

  // ---- diagnostics ----------------------------------------------------------------------
  auto* diag = app.add_subcommand("diagnostics", "flow diagnostics export");
  std::string d_flow, d_out = "out/diagnostics";
  diag->add_option("--flow", d_flow)->required();
  diag->add_option("--out", d_out);
  diag->callback([&] {
    const auto trajectories =
        ef::io::load_trajectories(fs::path(d_flow) / "trajectories.jsonl");
    const auto post_cut =
        ef::io::load_subgraphs(fs::path(d_flow) / "post_cut.jsonl");
    ef::pipeline::export_diagnostics(trajectories, post_cut, d_out);
    std::printf("diagnostics written to %s\n", d_out.c_str());
  });

  app.require_subcommand(1);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"geometric manifold-learning pipeline for multi-channel "
               "EEG-like signals"};
  dispatch(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const ef::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ef::BandRangeError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ef::IoError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const ef::FieldCountError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const ef::NumericParseError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const ef::OrderMismatchError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const ef::Error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "failure: %s\n", e.what());
    return 4;
  }
  return 0;
}
