#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "eegflow/classifier.hpp"
#include "eegflow/gcn.hpp"
#include "eegflow/manifold_graph.hpp"
#include "eegflow/ricci.hpp"
#include "eegflow/signal.hpp"
#include "eegflow/spectral.hpp"

namespace eegflow::io {

namespace fs = std::filesystem;

// --- generic helpers --------------------------------------------------------

std::string read_text_file(const fs::path& path);
void write_text_file(const fs::path& path, const std::string& content);

/// FNV-1a 64-bit; used for the deterministic report hash.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t file_fnv1a(const fs::path& path);
std::string hash_hex(std::uint64_t h);

// --- epoch store (manifest.json + data.bin, row-major doubles) ---------------

struct EpochStore {
  std::vector<sig::MultiChannelEpoch> epochs;
  std::string provenance;
};

void save_epoch_store(const fs::path& dir,
                      const std::vector<sig::MultiChannelEpoch>& epochs,
                      const std::string& provenance);
EpochStore load_epoch_store(const fs::path& dir);

// --- reduced store ------------------------------------------------------------

void save_reduced_store(const fs::path& dir,
                        const std::vector<spectral::ReducedSample>& samples);
std::vector<spectral::ReducedSample> load_reduced_store(const fs::path& dir);

// --- subgraphs (JSON lines) ---------------------------------------------------

struct SubgraphRecord {
  std::int64_t event_id = 0;
  sig::Label label;
  graph::WeightedSubgraph graph;
};

void save_subgraphs(const fs::path& path,
                    const std::vector<SubgraphRecord>& records);
std::vector<SubgraphRecord> load_subgraphs(const fs::path& path);

// --- flow trajectories (JSON lines, one record per iteration) ----------------

struct TrajectoryRecord {
  std::int64_t event_id = 0;
  ricci::FlowTrajectory trajectory;
};

void save_trajectories(const fs::path& path,
                       const std::vector<TrajectoryRecord>& records,
                       std::size_t histogram_bins = 32);
std::vector<TrajectoryRecord> load_trajectories(const fs::path& path);

// --- composite adjacency (CSV + JSON metadata) --------------------------------

struct CompositeMeta {
  double alpha = 0.5;
  double rho = 0.6;
};

void save_composite(const fs::path& csv_path, const fs::path& json_path,
                    const ricci::CompositeAdjacency& composite,
                    const CompositeMeta& meta);
ricci::CompositeAdjacency load_composite(const fs::path& csv_path,
                                         const fs::path& json_path);

// --- checkpoints ---------------------------------------------------------------

/// feature_scale records the unit choice applied to the feature matrices
/// before training (mean training-set Frobenius norm); embedding must apply
/// the same scale.
struct GcnCheckpoint {
  gcn::GcnParams params;
  double feature_scale = 1.0;
};

void save_gcn_checkpoint(const fs::path& path, const gcn::GcnParams& params,
                         const gcn::GcnTrainConfig& config,
                         double feature_scale = 1.0);
GcnCheckpoint load_gcn_checkpoint(const fs::path& path);

void save_cnn_checkpoint(const fs::path& path, const clf::CnnParams& params,
                         const clf::ClfTrainConfig& config);
clf::CnnParams load_cnn_checkpoint(const fs::path& path);

// --- embeddings / scores -------------------------------------------------------

struct EmbeddingRow {
  std::int64_t event_id = 0;
  sig::Label label;
  Eigen::VectorXd values;
};

void save_embeddings_csv(const fs::path& path,
                         const std::vector<EmbeddingRow>& rows);
std::vector<EmbeddingRow> load_embeddings_csv(const fs::path& path);

struct ScoreRow {
  std::int64_t event_id = 0;
  int label = 0; // 1 = digit
  double score = 0.0;
};

void save_scores_csv(const fs::path& path, const std::vector<ScoreRow>& rows);

// --- metrics -------------------------------------------------------------------

void save_metrics_json(const fs::path& path, const clf::MetricsReport& report);
clf::MetricsReport load_metrics_json(const fs::path& path);

// --- train/test split ------------------------------------------------------------

struct Split {
  std::vector<std::int64_t> train_event_ids;
  std::vector<std::int64_t> test_event_ids;
};

void save_split(const fs::path& path, const Split& split);
Split load_split(const fs::path& path);

} // namespace eegflow::io
