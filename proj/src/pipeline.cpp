#include "eegflow/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "eegflow/manifold_graph.hpp"
#include "eegflow/rng.hpp"
#include "eegflow/spectral.hpp"

namespace eegflow::pipeline {

using nlohmann::ordered_json;

namespace {

std::vector<std::pair<std::string, std::string>>
string_pairs(const nlohmann::json& j, const std::string& key) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2)
      throw ConfigError("config: '" + key + "' entries must be [a, b] pairs");
    out.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
  }
  return out;
}

void validate(const PipelineConfig& c) {
  if (c.n < 2 || c.n % 2 != 0)
    throw ConfigError("config: n must be even and >= 2");
  if (c.d_out != c.n / 2)
    throw ConfigError("config: d_out must equal n/2 so reduced time and "
                      "frequency vectors align");
  if (c.channels.empty()) throw ConfigError("config: channels is empty");
  if (!(c.alpha > 0.0 && c.alpha <= 2.0))
    throw ConfigError("config: alpha must be in (0, 2]");
  if (c.idleness < 0.0 || c.idleness >= 1.0)
    throw ConfigError("config: idleness must be in [0, 1)");
  if (c.flow_iterations < 1)
    throw ConfigError("config: flow_iterations must be >= 1");
  if (c.cut_ratio < 0.0 || c.cut_ratio > 1.0)
    throw ConfigError("config: cut_ratio must be in [0, 1]");
  if (c.aggregation != "over-subgraphs" && c.aggregation != "over-iterations")
    throw ConfigError("config: aggregation must be 'over-subgraphs' or "
                      "'over-iterations'");
  if (c.denoiser != "identity" && c.denoiser != "bandpass")
    throw ConfigError("config: denoiser must be 'identity' or 'bandpass'");
  if (c.denoiser == "bandpass" &&
      !(c.band_lo_hz >= 0.0 && c.band_lo_hz < c.band_hi_hz &&
        c.band_hi_hz <= c.sample_rate_hz / 2.0))
    throw ConfigError("config: band range must satisfy 0 <= lo < hi <= "
                      "sample_rate/2");
  if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0))
    throw ConfigError("config: train_fraction must be in (0, 1)");
  if (c.records_path.empty() && c.synth_samples < 4)
    throw ConfigError("config: synth_samples must be >= 4");
  if (!(c.ci_level > 0.0 && c.ci_level < 1.0))
    throw ConfigError("config: ci_level must be in (0, 1)");
  for (const auto& [a, b] : c.pairs) {
    auto known = [&](const std::string& name) {
      return std::find(c.channels.begin(), c.channels.end(), name) !=
             c.channels.end();
    };
    if (!known(a) || !known(b))
      throw ConfigError("config: pair references unknown channel");
  }
}

} // namespace

PipelineConfig parse_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }

  static const std::vector<std::string> known_keys{
      "records_path",  "synth_samples", "channels",
      "aliases",       "n",             "sample_rate_hz",
      "d_out",         "pairs",         "denoiser",
      "band_lo_hz",    "band_hi_hz",    "normalize_mixed",
      "alpha",         "idleness",      "flow_iterations",
      "cut_ratio",     "aggregation",   "gcn",
      "clf",           "train_fraction", "bootstrap_resamples",
      "ci_level",      "seed",          "out_dir"};
  for (const auto& [key, value] : j.items())
    if (std::find(known_keys.begin(), known_keys.end(), key) ==
        known_keys.end())
      throw ConfigError("config: unknown key '" + key + "'");

  PipelineConfig c;
  c.gcn.seed = 0; // 0 = derive from the master seed
  c.clf.seed = 0;
  try {
    c.records_path = j.value("records_path", c.records_path);
    c.synth_samples = j.value("synth_samples", c.synth_samples);
    if (j.contains("channels"))
      c.channels = j["channels"].get<std::vector<std::string>>();
    if (j.contains("aliases")) c.aliases = string_pairs(j["aliases"], "aliases");
    c.n = j.value("n", c.n);
    c.sample_rate_hz = j.value("sample_rate_hz", c.sample_rate_hz);
    c.d_out = j.value("d_out", c.n / 2);
    if (j.contains("pairs")) c.pairs = string_pairs(j["pairs"], "pairs");
    c.denoiser = j.value("denoiser", c.denoiser);
    c.band_lo_hz = j.value("band_lo_hz", c.band_lo_hz);
    c.band_hi_hz = j.value("band_hi_hz", c.band_hi_hz);
    c.normalize_mixed = j.value("normalize_mixed", c.normalize_mixed);
    c.alpha = j.value("alpha", c.alpha);
    c.idleness = j.value("idleness", c.idleness);
    c.flow_iterations = j.value("flow_iterations", c.flow_iterations);
    c.cut_ratio = j.value("cut_ratio", c.cut_ratio);
    c.aggregation = j.value("aggregation", c.aggregation);
    if (j.contains("gcn")) {
      const auto& g = j["gcn"];
      c.gcn.epochs = g.value("epochs", c.gcn.epochs);
      c.gcn.learning_rate = g.value("learning_rate", c.gcn.learning_rate);
      c.gcn.pair_sample_count =
          g.value("pair_sample_count", c.gcn.pair_sample_count);
      c.gcn.batch_pairs = g.value("batch_pairs", c.gcn.batch_pairs);
      c.gcn.seed = g.value("seed", c.gcn.seed);
    }
    if (j.contains("clf")) {
      const auto& t = j["clf"];
      c.clf.learning_rate = t.value("learning_rate", c.clf.learning_rate);
      c.clf.epochs = t.value("epochs", c.clf.epochs);
      c.clf.batch_size = t.value("batch_size", c.clf.batch_size);
      c.clf.seed = t.value("seed", c.clf.seed);
    }
    c.train_fraction = j.value("train_fraction", c.train_fraction);
    c.bootstrap_resamples =
        j.value("bootstrap_resamples", c.bootstrap_resamples);
    c.ci_level = j.value("ci_level", c.ci_level);
    c.seed = j.value("seed", c.seed);
    c.out_dir = j.value("out_dir", c.out_dir);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: bad field type: ") + e.what());
  }
  validate(c);
  return c;
}

PipelineConfig load_config(const fs::path& path) {
  return parse_config(io::read_text_file(path));
}

std::string config_to_json(const PipelineConfig& c) {
  ordered_json j;
  j["records_path"] = c.records_path;
  j["synth_samples"] = c.synth_samples;
  j["channels"] = c.channels;
  j["aliases"] = c.aliases;
  j["n"] = c.n;
  j["sample_rate_hz"] = c.sample_rate_hz;
  j["d_out"] = c.d_out;
  j["pairs"] = c.pairs;
  j["denoiser"] = c.denoiser;
  j["band_lo_hz"] = c.band_lo_hz;
  j["band_hi_hz"] = c.band_hi_hz;
  j["normalize_mixed"] = c.normalize_mixed;
  j["alpha"] = c.alpha;
  j["idleness"] = c.idleness;
  j["flow_iterations"] = c.flow_iterations;
  j["cut_ratio"] = c.cut_ratio;
  j["aggregation"] = c.aggregation;
  j["gcn"] = {{"epochs", c.gcn.epochs},
              {"learning_rate", c.gcn.learning_rate},
              {"pair_sample_count", c.gcn.pair_sample_count},
              {"batch_pairs", c.gcn.batch_pairs},
              {"seed", c.gcn.seed}};
  j["clf"] = {{"learning_rate", c.clf.learning_rate},
              {"epochs", c.clf.epochs},
              {"batch_size", c.clf.batch_size},
              {"seed", c.clf.seed}};
  j["train_fraction"] = c.train_fraction;
  j["bootstrap_resamples"] = c.bootstrap_resamples;
  j["ci_level"] = c.ci_level;
  j["seed"] = c.seed;
  j["out_dir"] = c.out_dir;
  return j.dump(2) + "\n";
}

// --- denoiser hook --------------------------------------------------------------

std::vector<double> bandpass_zero_phase(const std::vector<double>& x,
                                        double lo_hz, double hi_hz,
                                        double sample_rate_hz) {
  if (!(lo_hz >= 0.0 && lo_hz < hi_hz && hi_hz <= sample_rate_hz / 2.0))
    throw BandRangeError("bandpass: need 0 <= lo < hi <= sample_rate/2");
  const std::size_t n = x.size();
  if (n < 2) return x;

  std::vector<std::complex<double>> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = x[i];
  const bool pow2 = spectral::is_power_of_two(n);
  if (pow2) {
    spectral::fft_radix2(a, false);
  } else {
    // direct transform at desk scale
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
      std::complex<double> acc(0.0, 0.0);
      const double w = -2.0 * std::numbers::pi * double(k) / double(n);
      for (std::size_t t = 0; t < n; ++t)
        acc += x[t] * std::polar(1.0, w * double(t));
      out[k] = acc;
    }
    a = std::move(out);
  }

  const double bin_hz = sample_rate_hz / double(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double freq = double(std::min(k, n - k)) * bin_hz;
    if (freq < lo_hz || freq > hi_hz) a[k] = 0.0;
  }

  std::vector<double> y(n);
  if (pow2) {
    spectral::fft_radix2(a, true);
    for (std::size_t i = 0; i < n; ++i) y[i] = a[i].real();
  } else {
    for (std::size_t t = 0; t < n; ++t) {
      std::complex<double> acc(0.0, 0.0);
      const double w = 2.0 * std::numbers::pi * double(t) / double(n);
      for (std::size_t k = 0; k < n; ++k)
        acc += a[k] * std::polar(1.0, w * double(k));
      y[t] = acc.real() / double(n);
    }
  }
  return y;
}

sig::MultiChannelEpoch denoiser_hook(const sig::MultiChannelEpoch& epoch,
                                     const DenoiserSpec& spec,
                                     double sample_rate_hz) {
  if (spec.kind == "identity") return epoch;
  if (spec.kind != "bandpass")
    throw ConfigError("denoiser_hook: unknown denoiser '" + spec.kind + "'");
  sig::MultiChannelEpoch out = epoch;
  for (auto& channel : out.channels)
    channel =
        bandpass_zero_phase(channel, spec.lo_hz, spec.hi_hz, sample_rate_hz);
  return out;
}

// --- pipeline ---------------------------------------------------------------------

namespace {

struct Stopwatch {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

bool artifacts_exist(const fs::path& root,
                     const std::vector<std::string>& artifacts) {
  return std::all_of(artifacts.begin(), artifacts.end(),
                     [&](const std::string& a) {
                       return fs::exists(root / a);
                     });
}

io::Split make_split(const std::vector<spectral::ReducedSample>& samples,
                     double train_fraction, std::uint64_t seed) {
  std::vector<std::int64_t> digit_ids, other_ids;
  for (const auto& s : samples)
    (s.label.is_digit() ? digit_ids : other_ids).push_back(s.event_id);

  Rng rng(Rng::mix(seed, 0x73706c69));
  io::Split split;
  for (auto* group : {&digit_ids, &other_ids}) {
    std::sort(group->begin(), group->end());
    rng.shuffle(*group);
    const auto train_n = std::size_t(train_fraction * double(group->size()));
    for (std::size_t i = 0; i < group->size(); ++i)
      (i < train_n ? split.train_event_ids : split.test_event_ids)
          .push_back((*group)[i]);
  }
  std::sort(split.train_event_ids.begin(), split.train_event_ids.end());
  std::sort(split.test_event_ids.begin(), split.test_event_ids.end());
  if (split.train_event_ids.empty() || split.test_event_ids.empty())
    throw ConfigError("split: a partition came out empty; adjust "
                      "train_fraction or the sample count");
  return split;
}

} // namespace

RunReport run_pipeline(const PipelineConfig& config, bool resume) {
  validate(config);
  const fs::path root(config.out_dir);
  fs::create_directories(root);

  const std::string config_echo = config_to_json(config);
  io::write_text_file(root / "config.echo.json", config_echo);

  RunReport report;
  auto begin_stage = [&](const std::string& name,
                         const std::vector<std::string>& artifacts) {
    StageInfo info;
    info.name = name;
    info.artifacts = artifacts;
    info.resumed = resume && artifacts_exist(root, artifacts);
    return info;
  };

  const std::uint64_t synth_seed = Rng::mix(config.seed, 0x73796e);
  const std::uint64_t eigs_seed = Rng::mix(config.seed, 0x656967);
  const std::uint64_t gcn_seed =
      config.gcn.seed ? config.gcn.seed : Rng::mix(config.seed, 0x67636e);
  const std::uint64_t clf_seed =
      config.clf.seed ? config.clf.seed : Rng::mix(config.seed, 0x636c66);
  const std::uint64_t boot_seed = Rng::mix(config.seed, 0x6369);

  // 1. epochs ------------------------------------------------------------------
  std::vector<sig::MultiChannelEpoch> epochs;
  {
    auto info = begin_stage("epochs", {"epochs/manifest.json",
                                       "epochs/data.bin"});
    Stopwatch timer;
    if (info.resumed) {
      epochs = io::load_epoch_store(root / "epochs").epochs;
    } else if (!config.records_path.empty()) {
      std::ifstream in(config.records_path);
      if (!in)
        throw IoError("cannot open records file " + config.records_path);
      std::vector<sig::SignalRecord> records;
      std::string line;
      std::size_t line_no = 0;
      std::size_t corrected = 0;
      while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto parsed = sig::parse_record_line(line, line_no);
        if (parsed.sample_count_corrected) ++corrected;
        records.push_back(std::move(parsed.record));
      }
      sig::AssembleOptions opts;
      opts.channels = config.channels;
      opts.aliases = config.aliases;
      sig::AssembleStats stats;
      epochs = sig::assemble_epochs(records, config.n, opts, &stats);
      std::ostringstream provenance;
      provenance << "records=" << config.records_path
                 << " epochs=" << stats.epochs
                 << " dropped_missing=" << stats.dropped_missing_channel
                 << " dropped_invalid_label=" << stats.dropped_invalid_label
                 << " duplicates=" << stats.duplicate_records
                 << " size_corrections=" << corrected;
      io::save_epoch_store(root / "epochs", epochs, provenance.str());
    } else {
      sig::SynthOptions synth;
      synth.channels = config.channels;
      synth.sample_rate_hz = config.sample_rate_hz;
      const std::size_t n_a = config.synth_samples / 2;
      for (std::size_t i = 0; i < config.synth_samples; ++i) {
        const auto cls = i < n_a ? sig::SynthClass::A : sig::SynthClass::B;
        auto e = sig::synth_epoch(cls, Rng::mix(synth_seed, i), config.n,
                                  synth);
        e.event_id = std::int64_t(i);
        epochs.push_back(std::move(e));
      }
      io::save_epoch_store(root / "epochs", epochs,
                           "synthetic n=" + std::to_string(epochs.size()));
    }
    info.seconds = timer.seconds();
    report.stages.push_back(std::move(info));
  }
  if (epochs.empty()) throw IoError("no epochs available after ingest");

  // 2. denoiser hook -------------------------------------------------------------
  std::vector<sig::MultiChannelEpoch> denoised;
  {
    auto info = begin_stage("denoise", {"denoised/manifest.json",
                                        "denoised/data.bin"});
    Stopwatch timer;
    if (info.resumed) {
      denoised = io::load_epoch_store(root / "denoised").epochs;
    } else {
      DenoiserSpec spec{config.denoiser, config.band_lo_hz, config.band_hi_hz};
      denoised.reserve(epochs.size());
      for (const auto& e : epochs)
        denoised.push_back(denoiser_hook(e, spec, config.sample_rate_hz));
      io::save_epoch_store(root / "denoised", denoised,
                           "denoiser=" + config.denoiser);
    }
    info.seconds = timer.seconds();
    report.stages.push_back(std::move(info));
  }

  // 3. reduce ---------------------------------------------------------------------
  std::vector<spectral::ReducedSample> reduced;
  {
    auto info = begin_stage("reduce", {"reduced/manifest.json",
                                       "reduced/data.bin"});
    Stopwatch timer;
    if (info.resumed) {
      reduced = io::load_reduced_store(root / "reduced");
    } else {
      spectral::EigsOptions eigs;
      eigs.seed = eigs_seed;
      const spectral::JointEigenmap eigenmap(config.channels, config.pairs,
                                             config.n, config.d_out, eigs);
      reduced.reserve(denoised.size());
      for (const auto& e : denoised)
        reduced.push_back(
            spectral::reduce_epoch(e, eigenmap, config.sample_rate_hz));
      io::save_reduced_store(root / "reduced", reduced);
    }
    info.seconds = timer.seconds();
    report.stages.push_back(std::move(info));
  }

  // 4. subgraphs --------------------------------------------------------------------
  std::vector<io::SubgraphRecord> graphs;
  {
    auto info = begin_stage("graph", {"graphs/subgraphs.jsonl"});
    Stopwatch timer;
    if (info.resumed) {
      graphs = io::load_subgraphs(root / "graphs/subgraphs.jsonl");
    } else {
      graph::MetricOptions metric;
      metric.normalize_mixed = config.normalize_mixed;
      metric.spectrum_length = config.n;
      graphs.reserve(reduced.size());
      for (const auto& s : reduced)
        graphs.push_back({s.event_id, s.label, graph::build_subgraph(s, metric)});
      io::save_subgraphs(root / "graphs/subgraphs.jsonl", graphs);
    }
    info.seconds = timer.seconds();
    report.stages.push_back(std::move(info));
  }

  // 5. Ricci flow + cut ----------------------------------------------------------------
  std::vector<io::TrajectoryRecord> trajectories;
  std::vector<io::SubgraphRecord> post_cut;
  {
    auto info = begin_stage("flow", {"flow/trajectories.jsonl",
                                     "flow/post_cut.jsonl"});
    Stopwatch timer;
    if (info.resumed) {
      trajectories = io::load_trajectories(root / "flow/trajectories.jsonl");
      post_cut = io::load_subgraphs(root / "flow/post_cut.jsonl");
    } else {
      ricci::FlowOptions flow;
      flow.alpha = config.alpha;
      flow.idleness = config.idleness;
      flow.iterations = config.flow_iterations;
      trajectories.reserve(graphs.size());
      post_cut.reserve(graphs.size());
      for (const auto& g : graphs) {
        auto trajectory = ricci::evolve(g.graph, flow);
        auto final_graph = ricci::final_state(g.graph, trajectory);
        post_cut.push_back(
            {g.event_id, g.label, ricci::cut_edges(final_graph,
                                                   config.cut_ratio)});
        trajectories.push_back({g.event_id, std::move(trajectory)});
      }
      io::save_trajectories(root / "flow/trajectories.jsonl", trajectories);
      io::save_subgraphs(root / "flow/post_cut.jsonl", post_cut);
    }
    info.seconds = timer.seconds();
    report.stages.push_back(std::move(info));
  }

  // 6. split ------------------------------------------------------------------------------
  io::Split split;
  {
    auto info = begin_stage("split", {"split/split.json"});
    Stopwatch timer;
    if (info.resumed) {
      split = io::load_split(root / "split/split.json");
    } else {
      split = make_split(reduced, config.train_fraction, config.seed);
      io::save_split(root / "split/split.json", split);
    }
    info.seconds = timer.seconds();
    report.stages.push_back(std::move(info));
  }
  auto in_train = [&](std::int64_t event_id) {
    return std::binary_search(split.train_event_ids.begin(),
                              split.train_event_ids.end(), event_id);
  };

  // 7. aggregate --------------------------------------------------------------------------
  ricci::CompositeAdjacency composite;
  {
    auto info = begin_stage("aggregate", {"aggregate/composite.csv",
                                          "aggregate/composite.json"});
    Stopwatch timer;
    if (info.resumed) {
      composite = io::load_composite(root / "aggregate/composite.csv",
                                     root / "aggregate/composite.json");
    } else {
      // Aggregation is unsupervised but sees only the training partition so
      // the held-out samples never shape the shared adjacency.
      std::vector<graph::WeightedSubgraph> sources;
      if (config.aggregation == "over-subgraphs") {
        for (const auto& r : post_cut)
          if (in_train(r.event_id)) sources.push_back(r.graph);
      } else {
        for (std::size_t idx = 0; idx < trajectories.size(); ++idx) {
          if (!in_train(trajectories[idx].event_id)) continue;
          auto snapshots = ricci::iteration_graphs(
              graphs[idx].graph, trajectories[idx].trajectory);
          sources.insert(sources.end(),
                         std::make_move_iterator(snapshots.begin()),
                         std::make_move_iterator(snapshots.end()));
        }
      }
      composite = ricci::aggregate_adjacency(
          sources, config.aggregation == "over-subgraphs"
                       ? ricci::AggregationMode::over_subgraphs
                       : ricci::AggregationMode::over_iterations);
      io::save_composite(root / "aggregate/composite.csv",
                         root / "aggregate/composite.json", composite,
                         {config.alpha, config.cut_ratio});
    }
    info.seconds = timer.seconds();
    report.stages.push_back(std::move(info));
  }

  // 8. GCN training --------------------------------------------------------------------------
  // Feature units are arbitrary, so fix them: divide all feature matrices by
  // the mean training-set Frobenius norm. The distance target is mean-1 by
  // construction, so this only moves the trainable weights into a range the
  // published learning rate can resolve.
  gcn::GcnParams gcn_params;
  double feature_scale = 1.0;
  {
    auto info = begin_stage("train-gcn", {"gcn/checkpoint.json",
                                          "gcn/loss_curve.csv"});
    Stopwatch timer;
    if (info.resumed) {
      auto checkpoint = io::load_gcn_checkpoint(root / "gcn/checkpoint.json");
      gcn_params = std::move(checkpoint.params);
      feature_scale = checkpoint.feature_scale;
    } else {
      std::vector<Eigen::MatrixXd> train_features;
      for (const auto& s : reduced)
        if (in_train(s.event_id)) train_features.push_back(s.matrix());
      double norm_sum = 0.0;
      for (const auto& x : train_features) norm_sum += x.norm();
      feature_scale = norm_sum / double(train_features.size());
      if (feature_scale <= 0.0) feature_scale = 1.0;
      for (auto& x : train_features) x /= feature_scale;
      gcn::GcnTrainConfig cfg = config.gcn;
      cfg.seed = gcn_seed;
      const auto result =
          gcn::train_gcn(train_features, composite.matrix, cfg);
      gcn_params = result.params;
      io::save_gcn_checkpoint(root / "gcn/checkpoint.json", gcn_params, cfg,
                              feature_scale);
      std::ostringstream curve;
      curve << "epoch,loss\n";
      for (std::size_t e = 0; e < result.loss_curve.size(); ++e)
        curve << e << ',' << result.loss_curve[e] << '\n';
      io::write_text_file(root / "gcn/loss_curve.csv", curve.str());
    }
    info.seconds = timer.seconds();
    report.stages.push_back(std::move(info));
  }

  // 9. embed -----------------------------------------------------------------------------------
  std::vector<io::EmbeddingRow> embeddings;
  {
    auto info = begin_stage("embed", {"embeddings/embeddings.csv"});
    Stopwatch timer;
    if (info.resumed) {
      embeddings =
          io::load_embeddings_csv(root / "embeddings/embeddings.csv");
    } else {
      embeddings.reserve(reduced.size());
      for (const auto& s : reduced)
        embeddings.push_back({s.event_id, s.label,
                              gcn::embed(gcn_params, composite.matrix,
                                         s.matrix() / feature_scale)});
      io::save_embeddings_csv(root / "embeddings/embeddings.csv", embeddings);
    }
    info.seconds = timer.seconds();
    report.stages.push_back(std::move(info));
  }

  // 10. classifier training -----------------------------------------------------------------------
  clf::CnnParams clf_params;
  {
    auto info = begin_stage("train-clf", {"clf/checkpoint.json",
                                          "clf/loss_curve.csv"});
    Stopwatch timer;
    if (info.resumed) {
      clf_params = io::load_cnn_checkpoint(root / "clf/checkpoint.json");
    } else {
      std::vector<Eigen::VectorXd> train_z;
      std::vector<int> train_y;
      for (const auto& row : embeddings)
        if (in_train(row.event_id)) {
          train_z.push_back(row.values);
          train_y.push_back(row.label.is_digit() ? 1 : 0);
        }
      clf::ClfTrainConfig cfg = config.clf;
      cfg.seed = clf_seed;
      clf::CnnConfig arch = config.cnn_arch;
      arch.input_dim = config.d_out;
      const auto result = clf::train_cnn(train_z, train_y, cfg, arch);
      clf_params = result.params;
      io::save_cnn_checkpoint(root / "clf/checkpoint.json", clf_params, cfg);
      std::ostringstream curve;
      curve << "epoch,loss\n";
      for (std::size_t e = 0; e < result.loss_curve.size(); ++e)
        curve << e << ',' << result.loss_curve[e] << '\n';
      io::write_text_file(root / "clf/loss_curve.csv", curve.str());
    }
    info.seconds = timer.seconds();
    report.stages.push_back(std::move(info));
  }

  // 11. evaluation ---------------------------------------------------------------------------------
  {
    auto info = begin_stage("eval", {"report/metrics.json",
                                     "report/scores.csv"});
    Stopwatch timer;
    if (info.resumed) {
      report.metrics = io::load_metrics_json(root / "report/metrics.json");
    } else {
      std::vector<io::ScoreRow> rows;
      std::vector<double> scores;
      std::vector<int> labels;
      for (const auto& row : embeddings) {
        if (in_train(row.event_id)) continue;
        const double p = clf::cnn_forward(clf_params, row.values);
        const int y = row.label.is_digit() ? 1 : 0;
        rows.push_back({row.event_id, y, p});
        scores.push_back(p);
        labels.push_back(y);
      }
      report.metrics = clf::evaluate(scores, labels);
      std::size_t metric_idx = 0;
      for (const auto* name :
           {"accuracy", "f1", "auroc", "sensitivity", "specificity"}) {
        report.metrics.ci[name] = clf::bootstrap_ci(
            name, scores, labels, config.bootstrap_resamples, config.ci_level,
            Rng::mix(boot_seed, metric_idx++));
      }
      io::save_metrics_json(root / "report/metrics.json", report.metrics);
      io::save_scores_csv(root / "report/scores.csv", rows);
    }
    info.seconds = timer.seconds();
    report.stages.push_back(std::move(info));
  }

  // 12. diagnostics -----------------------------------------------------------------------------------
  {
    auto info = begin_stage(
        "diagnostics",
        {"diagnostics/weight_hist.csv", "diagnostics/weight_hist.svg",
         "diagnostics/cut_table.csv", "diagnostics/curvature_stats.csv",
         "diagnostics/bimodality.json"});
    Stopwatch timer;
    if (!info.resumed)
      export_diagnostics(trajectories, post_cut, root / "diagnostics");
    info.seconds = timer.seconds();
    report.stages.push_back(std::move(info));
  }

  // deterministic report hash over the config echo and every artifact; the
  // output location itself does not change the result
  PipelineConfig hashed_config = config;
  hashed_config.out_dir.clear();
  std::uint64_t h = io::fnv1a(config_to_json(hashed_config));
  for (const auto& stage : report.stages)
    for (const auto& artifact : stage.artifacts) {
      h = io::fnv1a(artifact, h);
      h = io::fnv1a(io::read_text_file(root / artifact), h);
    }
  report.report_hash = io::hash_hex(h);

  ordered_json j;
  j["schema"] = "eegflow.run-report/1";
  j["report_hash"] = report.report_hash;
  j["config"] = nlohmann::json::parse(config_echo);
  ordered_json stages = ordered_json::array();
  for (const auto& s : report.stages)
    stages.push_back({{"name", s.name},
                      {"seconds", s.seconds},
                      {"resumed", s.resumed},
                      {"artifacts", s.artifacts}});
  j["stages"] = std::move(stages);
  j["metrics"] = {{"accuracy", report.metrics.accuracy},
                  {"f1", report.metrics.f1},
                  {"auroc", report.metrics.auroc},
                  {"sensitivity", report.metrics.sensitivity},
                  {"specificity", report.metrics.specificity}};
  io::write_text_file(root / "report.json", j.dump(2) + "\n");
  return report;
}

} // namespace eegflow::pipeline
