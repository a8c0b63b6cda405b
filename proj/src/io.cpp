#include "eegflow/io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace eegflow::io {

using nlohmann::json;

namespace {

constexpr std::string_view kEpochSchema = "eegflow.epoch-store/1";
constexpr std::string_view kReducedSchema = "eegflow.reduced-store/1";
constexpr std::string_view kSubgraphSchema = "eegflow.subgraph/1";
constexpr std::string_view kTrajectorySchema = "eegflow.trajectory/1";
constexpr std::string_view kCompositeSchema = "eegflow.composite/1";
constexpr std::string_view kGcnSchema = "eegflow.gcn-checkpoint/1";
constexpr std::string_view kCnnSchema = "eegflow.cnn-checkpoint/1";
constexpr std::string_view kMetricsSchema = "eegflow.metrics/1";
constexpr std::string_view kSplitSchema = "eegflow.split/1";

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw IoError("failed to format a double");
  return std::string(buf, ptr);
}

double parse_double(std::string_view tok) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw IoError("malformed numeric field '" + std::string(tok) + "'");
  return v;
}

void expect_schema(const json& j, std::string_view want,
                   const fs::path& path) {
  if (!j.contains("schema") || j["schema"].get<std::string>() != want)
    throw IoError(path.string() + ": expected schema '" + std::string(want) +
                  "'");
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = Eigen::Index(j.size());
  if (rows == 0) return {};
  const auto cols = Eigen::Index(j.front().size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (Eigen::Index(j[std::size_t(i)].size()) != cols)
      throw IoError("ragged matrix in JSON");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(i, c) = j[std::size_t(i)][std::size_t(c)].get<double>();
  }
  return m;
}

json bools_to_json(
    const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(int(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>
bools_from_json(const json& j) {
  const auto rows = Eigen::Index(j.size());
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> m(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < rows; ++c)
      m(i, c) = j[std::size_t(i)][std::size_t(c)].get<int>() != 0;
  return m;
}

void write_doubles_bin(const fs::path& path, const std::vector<double>& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(data.data()),
            std::streamsize(data.size() * sizeof(double)));
  if (!out) throw IoError("short write to " + path.string());
}

std::vector<double> read_doubles_bin(const fs::path& path,
                                     std::size_t expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<double> data(expected);
  in.read(reinterpret_cast<char*>(data.data()),
          std::streamsize(expected * sizeof(double)));
  if (std::size_t(in.gcount()) != expected * sizeof(double))
    throw IoError(path.string() + ": unexpected size");
  return data;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

} // namespace

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("short write to " + path.string());
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t file_fnv1a(const fs::path& path) {
  return fnv1a(read_text_file(path));
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
  return std::string(buf);
}

// --- epoch store --------------------------------------------------------------

void save_epoch_store(const fs::path& dir,
                      const std::vector<sig::MultiChannelEpoch>& epochs,
                      const std::string& provenance) {
  fs::create_directories(dir);
  json manifest;
  manifest["schema"] = kEpochSchema;
  manifest["provenance"] = provenance;
  manifest["n"] = epochs.empty() ? 0 : epochs.front().n_samples();
  manifest["channels"] =
      epochs.empty() ? json::array() : json(epochs.front().channel_names);
  json list = json::array();
  std::vector<double> data;
  for (const auto& e : epochs) {
    json item;
    item["event_id"] = e.event_id;
    item["label"] = e.label.code;
    item["duration_s"] = e.duration_s;
    list.push_back(std::move(item));
    for (const auto& c : e.channels)
      data.insert(data.end(), c.begin(), c.end());
  }
  manifest["epochs"] = std::move(list);
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
  write_doubles_bin(dir / "data.bin", data);
}

EpochStore load_epoch_store(const fs::path& dir) {
  const json manifest = json::parse(read_text_file(dir / "manifest.json"));
  expect_schema(manifest, kEpochSchema, dir / "manifest.json");
  EpochStore store;
  store.provenance = manifest.value("provenance", "");
  const auto n = manifest["n"].get<std::size_t>();
  const auto channels = manifest["channels"].get<std::vector<std::string>>();
  const auto& list = manifest["epochs"];
  const auto data =
      read_doubles_bin(dir / "data.bin", list.size() * channels.size() * n);

  std::size_t offset = 0;
  for (const auto& item : list) {
    sig::MultiChannelEpoch e;
    e.event_id = item["event_id"].get<std::int64_t>();
    e.label.code = item["label"].get<int>();
    e.duration_s = item["duration_s"].get<double>();
    e.channel_names = channels;
    for (std::size_t c = 0; c < channels.size(); ++c) {
      e.channels.emplace_back(data.begin() + std::ptrdiff_t(offset),
                              data.begin() + std::ptrdiff_t(offset + n));
      offset += n;
    }
    store.epochs.push_back(std::move(e));
  }
  return store;
}

// --- reduced store --------------------------------------------------------------

void save_reduced_store(const fs::path& dir,
                        const std::vector<spectral::ReducedSample>& samples) {
  fs::create_directories(dir);
  json manifest;
  manifest["schema"] = kReducedSchema;
  manifest["d"] =
      samples.empty() ? 0 : samples.front().time_vecs.front().size();
  manifest["channels"] =
      samples.empty() ? json::array() : json(samples.front().channel_names);
  manifest["row_order"] =
      samples.empty() ? json::array() : json(samples.front().row_names());
  json list = json::array();
  std::vector<double> data;
  for (const auto& s : samples) {
    json item;
    item["event_id"] = s.event_id;
    item["label"] = s.label.code;
    list.push_back(std::move(item));
    for (const auto& v : s.time_vecs) data.insert(data.end(), v.begin(), v.end());
    for (const auto& v : s.freq_vecs) data.insert(data.end(), v.begin(), v.end());
  }
  manifest["samples"] = std::move(list);
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
  write_doubles_bin(dir / "data.bin", data);
}

std::vector<spectral::ReducedSample> load_reduced_store(const fs::path& dir) {
  const json manifest = json::parse(read_text_file(dir / "manifest.json"));
  expect_schema(manifest, kReducedSchema, dir / "manifest.json");
  const auto d = manifest["d"].get<std::size_t>();
  const auto channels = manifest["channels"].get<std::vector<std::string>>();
  const auto& list = manifest["samples"];
  const auto data = read_doubles_bin(dir / "data.bin",
                                     list.size() * 2 * channels.size() * d);

  std::vector<spectral::ReducedSample> samples;
  std::size_t offset = 0;
  for (const auto& item : list) {
    spectral::ReducedSample s;
    s.event_id = item["event_id"].get<std::int64_t>();
    s.label.code = item["label"].get<int>();
    s.channel_names = channels;
    for (std::size_t c = 0; c < channels.size(); ++c) {
      s.time_vecs.emplace_back(data.begin() + std::ptrdiff_t(offset),
                               data.begin() + std::ptrdiff_t(offset + d));
      offset += d;
    }
    for (std::size_t c = 0; c < channels.size(); ++c) {
      s.freq_vecs.emplace_back(data.begin() + std::ptrdiff_t(offset),
                               data.begin() + std::ptrdiff_t(offset + d));
      offset += d;
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

// --- subgraphs -------------------------------------------------------------------

namespace {

json node_to_json(const graph::NodeVector& n) {
  json j;
  j["channel"] = n.channel;
  j["domain"] = n.domain == graph::Domain::time ? "time" : "freq";
  j["values"] = n.values;
  return j;
}

graph::NodeVector node_from_json(const json& j) {
  graph::NodeVector n;
  n.channel = j["channel"].get<std::string>();
  n.domain = j["domain"].get<std::string>() == "time" ? graph::Domain::time
                                                      : graph::Domain::freq;
  n.values = j["values"].get<std::vector<double>>();
  return n;
}

} // namespace

void save_subgraphs(const fs::path& path,
                    const std::vector<SubgraphRecord>& records) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (const auto& r : records) {
    json j;
    j["schema"] = kSubgraphSchema;
    j["event_id"] = r.event_id;
    j["label"] = r.label.code;
    json nodes = json::array();
    for (const auto& n : r.graph.nodes) nodes.push_back(node_to_json(n));
    j["nodes"] = std::move(nodes);
    j["weights"] = matrix_to_json(r.graph.weights);
    j["present"] = bools_to_json(r.graph.edge_present);
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("short write to " + path.string());
}

std::vector<SubgraphRecord> load_subgraphs(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<SubgraphRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    expect_schema(j, kSubgraphSchema, path);
    SubgraphRecord r;
    r.event_id = j["event_id"].get<std::int64_t>();
    r.label.code = j["label"].get<int>();
    for (const auto& n : j["nodes"]) r.graph.nodes.push_back(node_from_json(n));
    r.graph.weights = matrix_from_json(j["weights"]);
    r.graph.edge_present = bools_from_json(j["present"]);
    records.push_back(std::move(r));
  }
  return records;
}

// --- trajectories ----------------------------------------------------------------

void save_trajectories(const fs::path& path,
                       const std::vector<TrajectoryRecord>& records,
                       std::size_t histogram_bins) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (const auto& r : records) {
    const auto& t = r.trajectory;
    for (std::size_t it = 0; it < t.states.size(); ++it) {
      json j;
      j["schema"] = kTrajectorySchema;
      j["event_id"] = r.event_id;
      j["iteration"] = it;
      j["alpha"] = t.alpha;
      j["node_names"] = t.node_names;
      j["weights"] = matrix_to_json(t.states[it]);
      if (it > 0)
        j["curvature"] = matrix_to_json(t.curvatures[it - 1].kappa);
      const auto hist =
          ricci::weight_histogram(t.states[it], t.edge_present, histogram_bins);
      j["histogram"] = {{"lo", hist.lo},
                        {"hi", hist.hi},
                        {"counts", hist.counts}};
      if (it == 0) j["present"] = bools_to_json(t.edge_present);
      out << j.dump() << '\n';
    }
  }
  if (!out) throw IoError("short write to " + path.string());
}

std::vector<TrajectoryRecord> load_trajectories(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<TrajectoryRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    expect_schema(j, kTrajectorySchema, path);
    const auto iteration = j["iteration"].get<std::size_t>();
    if (iteration == 0) {
      TrajectoryRecord r;
      r.event_id = j["event_id"].get<std::int64_t>();
      r.trajectory.alpha = j["alpha"].get<double>();
      r.trajectory.node_names =
          j["node_names"].get<std::vector<std::string>>();
      r.trajectory.edge_present = bools_from_json(j["present"]);
      r.trajectory.states.push_back(matrix_from_json(j["weights"]));
      records.push_back(std::move(r));
    } else {
      if (records.empty())
        throw IoError(path.string() + ": iteration record before state 0");
      auto& t = records.back().trajectory;
      t.states.push_back(matrix_from_json(j["weights"]));
      ricci::CurvatureMap map;
      map.kappa = matrix_from_json(j["curvature"]);
      map.edge_present = t.edge_present;
      t.curvatures.push_back(std::move(map));
    }
  }
  return records;
}

// --- composite -------------------------------------------------------------------

void save_composite(const fs::path& csv_path, const fs::path& json_path,
                    const ricci::CompositeAdjacency& composite,
                    const CompositeMeta& meta) {
  std::ostringstream csv;
  for (Eigen::Index i = 0; i < composite.matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < composite.matrix.cols(); ++j) {
      if (j) csv << ',';
      csv << format_double(composite.matrix(i, j));
    }
    csv << '\n';
  }
  write_text_file(csv_path, csv.str());

  json j;
  j["schema"] = kCompositeSchema;
  j["mode"] = composite.mode == ricci::AggregationMode::over_subgraphs
                  ? "over-subgraphs"
                  : "over-iterations";
  j["source_count"] = composite.source_count;
  j["node_names"] = composite.node_names;
  j["alpha"] = meta.alpha;
  j["rho"] = meta.rho;
  write_text_file(json_path, j.dump(2) + "\n");
}

ricci::CompositeAdjacency load_composite(const fs::path& csv_path,
                                         const fs::path& json_path) {
  const json j = json::parse(read_text_file(json_path));
  expect_schema(j, kCompositeSchema, json_path);
  ricci::CompositeAdjacency composite;
  composite.mode = j["mode"].get<std::string>() == "over-subgraphs"
                       ? ricci::AggregationMode::over_subgraphs
                       : ricci::AggregationMode::over_iterations;
  composite.source_count = j["source_count"].get<std::size_t>();
  composite.node_names = j["node_names"].get<std::vector<std::string>>();

  std::istringstream csv(read_text_file(csv_path));
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& tok : split_csv_line(line)) row.push_back(parse_double(tok));
    rows.push_back(std::move(row));
  }
  composite.matrix.resize(Eigen::Index(rows.size()),
                          Eigen::Index(rows.empty() ? 0 : rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < rows[i].size(); ++c)
      composite.matrix(Eigen::Index(i), Eigen::Index(c)) = rows[i][c];
  return composite;
}

// --- checkpoints -------------------------------------------------------------------

void save_gcn_checkpoint(const fs::path& path, const gcn::GcnParams& params,
                         const gcn::GcnTrainConfig& config,
                         double feature_scale) {
  json j;
  j["schema"] = kGcnSchema;
  j["dim"] = params.dim();
  j["feature_scale"] = feature_scale;
  j["w1"] = matrix_to_json(params.w1);
  j["w_skip1"] = matrix_to_json(params.w_skip1);
  j["w2"] = matrix_to_json(params.w2);
  j["w_skip2"] = matrix_to_json(params.w_skip2);
  j["config"] = {{"epochs", config.epochs},
                 {"learning_rate", config.learning_rate},
                 {"beta1", config.beta1},
                 {"beta2", config.beta2},
                 {"adam_epsilon", config.adam_epsilon},
                 {"pair_sample_count", config.pair_sample_count},
                 {"batch_pairs", config.batch_pairs},
                 {"seed", config.seed}};
  write_text_file(path, j.dump() + "\n");
}

GcnCheckpoint load_gcn_checkpoint(const fs::path& path) {
  const json j = json::parse(read_text_file(path));
  expect_schema(j, kGcnSchema, path);
  GcnCheckpoint c;
  c.feature_scale = j.value("feature_scale", 1.0);
  c.params.w1 = matrix_from_json(j["w1"]);
  c.params.w_skip1 = matrix_from_json(j["w_skip1"]);
  c.params.w2 = matrix_from_json(j["w2"]);
  c.params.w_skip2 = matrix_from_json(j["w_skip2"]);
  return c;
}

void save_cnn_checkpoint(const fs::path& path, const clf::CnnParams& params,
                         const clf::ClfTrainConfig& config) {
  json j;
  j["schema"] = kCnnSchema;
  j["arch"] = {{"input_dim", params.config.input_dim},
               {"conv1_filters", params.config.conv1_filters},
               {"conv2_filters", params.config.conv2_filters},
               {"kernel", params.config.kernel},
               {"pool", params.config.pool}};
  j["conv1_w"] = matrix_to_json(params.conv1_w);
  j["conv1_b"] = matrix_to_json(params.conv1_b);
  json c2 = json::array();
  for (const auto& w : params.conv2_w) c2.push_back(matrix_to_json(w));
  j["conv2_w"] = std::move(c2);
  j["conv2_b"] = matrix_to_json(params.conv2_b);
  j["dense_w"] = matrix_to_json(params.dense_w);
  j["dense_b"] = matrix_to_json(params.dense_b);
  j["config"] = {{"learning_rate", config.learning_rate},
                 {"epochs", config.epochs},
                 {"batch_size", config.batch_size},
                 {"seed", config.seed}};
  write_text_file(path, j.dump() + "\n");
}

clf::CnnParams load_cnn_checkpoint(const fs::path& path) {
  const json j = json::parse(read_text_file(path));
  expect_schema(j, kCnnSchema, path);
  clf::CnnParams p;
  p.config.input_dim = j["arch"]["input_dim"].get<std::size_t>();
  p.config.conv1_filters = j["arch"]["conv1_filters"].get<std::size_t>();
  p.config.conv2_filters = j["arch"]["conv2_filters"].get<std::size_t>();
  p.config.kernel = j["arch"]["kernel"].get<std::size_t>();
  p.config.pool = j["arch"]["pool"].get<std::size_t>();
  p.conv1_w = matrix_from_json(j["conv1_w"]);
  p.conv1_b = matrix_from_json(j["conv1_b"]);
  for (const auto& w : j["conv2_w"]) p.conv2_w.push_back(matrix_from_json(w));
  p.conv2_b = matrix_from_json(j["conv2_b"]);
  p.dense_w = matrix_from_json(j["dense_w"]);
  p.dense_b = matrix_from_json(j["dense_b"]);
  return p;
}

// --- embeddings / scores -------------------------------------------------------------

void save_embeddings_csv(const fs::path& path,
                         const std::vector<EmbeddingRow>& rows) {
  std::ostringstream out;
  out << "event_id,label";
  const auto d = rows.empty() ? 0 : rows.front().values.size();
  for (Eigen::Index i = 0; i < d; ++i) out << ",v" << i;
  out << '\n';
  for (const auto& r : rows) {
    out << r.event_id << ',' << r.label.code;
    for (Eigen::Index i = 0; i < r.values.size(); ++i)
      out << ',' << format_double(r.values(i));
    out << '\n';
  }
  write_text_file(path, out.str());
}

std::vector<EmbeddingRow> load_embeddings_csv(const fs::path& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + ": empty");
  std::vector<EmbeddingRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto toks = split_csv_line(line);
    if (toks.size() < 3) throw IoError(path.string() + ": short row");
    EmbeddingRow r;
    r.event_id = std::int64_t(parse_double(toks[0]));
    r.label.code = int(parse_double(toks[1]));
    r.values.resize(Eigen::Index(toks.size() - 2));
    for (std::size_t i = 2; i < toks.size(); ++i)
      r.values(Eigen::Index(i - 2)) = parse_double(toks[i]);
    rows.push_back(std::move(r));
  }
  return rows;
}

void save_scores_csv(const fs::path& path, const std::vector<ScoreRow>& rows) {
  std::ostringstream out;
  out << "event_id,label,score\n";
  for (const auto& r : rows)
    out << r.event_id << ',' << r.label << ',' << format_double(r.score)
        << '\n';
  write_text_file(path, out.str());
}

// --- metrics ---------------------------------------------------------------------------

void save_metrics_json(const fs::path& path,
                       const clf::MetricsReport& report) {
  json j;
  j["schema"] = kMetricsSchema;
  j["accuracy"] = report.accuracy;
  j["f1"] = report.f1;
  j["auroc"] = report.auroc;
  j["sensitivity"] = report.sensitivity;
  j["specificity"] = report.specificity;
  j["confusion"] = {{"tp", report.confusion.tp},
                    {"fp", report.confusion.fp},
                    {"fn", report.confusion.fn},
                    {"tn", report.confusion.tn}};
  json ci;
  for (const auto& [name, bounds] : report.ci)
    ci[name] = {bounds.first, bounds.second};
  j["ci"] = std::move(ci);
  write_text_file(path, j.dump(2) + "\n");
}

clf::MetricsReport load_metrics_json(const fs::path& path) {
  const json j = json::parse(read_text_file(path));
  expect_schema(j, kMetricsSchema, path);
  clf::MetricsReport r;
  r.accuracy = j["accuracy"].get<double>();
  r.f1 = j["f1"].get<double>();
  r.auroc = j["auroc"].get<double>();
  r.sensitivity = j["sensitivity"].get<double>();
  r.specificity = j["specificity"].get<double>();
  r.confusion.tp = j["confusion"]["tp"].get<std::size_t>();
  r.confusion.fp = j["confusion"]["fp"].get<std::size_t>();
  r.confusion.fn = j["confusion"]["fn"].get<std::size_t>();
  r.confusion.tn = j["confusion"]["tn"].get<std::size_t>();
  for (const auto& [name, bounds] : j["ci"].items())
    r.ci[name] = {bounds[0].get<double>(), bounds[1].get<double>()};
  return r;
}

// --- split -----------------------------------------------------------------------------

void save_split(const fs::path& path, const Split& split) {
  json j;
  j["schema"] = kSplitSchema;
  j["train_event_ids"] = split.train_event_ids;
  j["test_event_ids"] = split.test_event_ids;
  write_text_file(path, j.dump(2) + "\n");
}

Split load_split(const fs::path& path) {
  const json j = json::parse(read_text_file(path));
  expect_schema(j, kSplitSchema, path);
  Split s;
  s.train_event_ids = j["train_event_ids"].get<std::vector<std::int64_t>>();
  s.test_event_ids = j["test_event_ids"].get<std::vector<std::int64_t>>();
  return s;
}

} // namespace eegflow::io
