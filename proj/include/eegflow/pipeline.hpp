#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "eegflow/classifier.hpp"
#include "eegflow/gcn.hpp"
#include "eegflow/io.hpp"
#include "eegflow/ricci.hpp"
#include "eegflow/signal.hpp"

namespace eegflow::pipeline {

namespace fs = std::filesystem;

/// Every default matches the published pipeline values where one exists:
/// N=512, d_out=256, 10 flow iterations, 0.6 cut ratio, GCN 100 epochs at
/// 1e-3, classifier 70 epochs at 0.01 with batch 80.
struct PipelineConfig {
  // data source: a records file, or synthetic two-class epochs when empty
  std::string records_path;
  std::size_t synth_samples = 1000; // half class A, half class B
  std::vector<std::string> channels{"FP1", "FP2", "TP9", "TP10"};
  std::vector<std::pair<std::string, std::string>> aliases;
  std::size_t n = 512;
  double sample_rate_hz = 256.0;
  std::size_t d_out = 256;
  std::vector<std::pair<std::string, std::string>> pairs{{"FP1", "FP2"},
                                                         {"TP9", "TP10"}};
  // pluggable denoiser hook
  std::string denoiser = "identity"; // "identity" | "bandpass"
  double band_lo_hz = 1.0;
  double band_hi_hz = 45.0;
  // node metric
  bool normalize_mixed = true;
  // Ricci flow
  double alpha = 0.5;
  double idleness = 0.0;
  std::size_t flow_iterations = 10;
  double cut_ratio = 0.6;
  std::string aggregation = "over-subgraphs"; // | "over-iterations"
  // embedding / classification
  gcn::GcnTrainConfig gcn;
  clf::ClfTrainConfig clf;
  clf::CnnConfig cnn_arch;
  double train_fraction = 0.8;
  std::size_t bootstrap_resamples = 1000;
  double ci_level = 0.95;

  std::uint64_t seed = 42;
  std::string out_dir = "out";
};

PipelineConfig parse_config(const std::string& json_text);
PipelineConfig load_config(const fs::path& path);
/// Canonical JSON echo; hashing this plus the artifacts gives the report hash.
std::string config_to_json(const PipelineConfig& config);

struct StageInfo {
  std::string name;
  double seconds = 0.0;
  bool resumed = false;
  std::vector<std::string> artifacts; // paths relative to out_dir
};

struct RunReport {
  std::vector<StageInfo> stages;
  clf::MetricsReport metrics;
  std::string report_hash; // deterministic: config + artifact bytes
};

/// Full pipeline: data -> denoise -> reduce -> subgraphs -> flow/cut ->
/// aggregate -> GCN -> embed -> classifier -> metrics (+ diagnostics).
/// Every stage persists its artifact; with `resume` intact artifacts are
/// loaded instead of recomputed.
RunReport run_pipeline(const PipelineConfig& config, bool resume = false);

// --- denoiser hook ------------------------------------------------------------

struct DenoiserSpec {
  std::string kind = "identity"; // "identity" | "bandpass"
  double lo_hz = 1.0;
  double hi_hz = 45.0;
};

sig::MultiChannelEpoch denoiser_hook(const sig::MultiChannelEpoch& epoch,
                                     const DenoiserSpec& spec,
                                     double sample_rate_hz = 256.0);

/// Zero-phase band-pass via frequency-domain masking.
std::vector<double> bandpass_zero_phase(const std::vector<double>& x,
                                        double lo_hz, double hi_hz,
                                        double sample_rate_hz);

// --- diagnostics ----------------------------------------------------------------

/// Edge-weight histograms (CSV + SVG), cut-frequency table, per-iteration
/// curvature summary, and a dip-statistic bimodality flag.
void export_diagnostics(const std::vector<io::TrajectoryRecord>& trajectories,
                        const std::vector<io::SubgraphRecord>& post_cut,
                        const fs::path& out_dir, std::size_t bins = 32);

/// Hartigan's dip statistic: the sup-distance from the empirical CDF to the
/// closest unimodal CDF, found by bisection over per-mode feasibility of
/// convex/concave band fits. Exact up to bisection tolerance.
double dip_statistic(std::vector<double> values);

} // namespace eegflow::pipeline
