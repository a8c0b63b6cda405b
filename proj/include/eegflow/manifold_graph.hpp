#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eegflow/errors.hpp"
#include "eegflow/spectral.hpp"

namespace eegflow::graph {

enum class Domain { time, freq };

/// One graph node: a channel's reduced time series or its power spectrum.
struct NodeVector {
  std::string channel;
  Domain domain = Domain::time;
  std::vector<double> values;
};

/// Per-sample complete weighted graph on 4 channels x 2 domains. Weights are
/// distances: larger means more distant.
struct WeightedSubgraph {
  std::vector<NodeVector> nodes; // normative order: time rows, then freq rows
  Eigen::MatrixXd weights;       // symmetric, zero diagonal
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> edge_present;

  std::size_t size() const { return nodes.size(); }
  std::size_t present_edge_count() const;
  std::vector<std::string> node_names() const;
};

struct MetricOptions {
  // Divide the mixed-case Euclidean term by sqrt(L) so it stays commensurate
  // with the bounded correlation term.
  bool normalize_mixed = true;
  // Length of the zero-padded lift used to take a time node's spectrum.
  std::size_t spectrum_length = 512;
};

/// Mixed-domain node metric:
///   time/time:  ||u - v||_2
///   freq/freq:  (1 - rho(u, v)) / 2
///   mixed:      ((||u - v||_2 / sqrt(L)) + FFTdelta) / 2, where FFTdelta
///               correlates the time node's zero-padded one-sided power
///               spectrum against the freq node's values.
double node_distance(const NodeVector& u, const NodeVector& v,
                     const MetricOptions& options = {});

/// Complete subgraph over the sample's 8 nodes with node_distance weights.
WeightedSubgraph build_subgraph(const spectral::ReducedSample& sample,
                                const MetricOptions& options = {});

/// All-pairs shortest paths over present edges (edge length = weight);
/// unreachable pairs are +infinity.
Eigen::MatrixXd shortest_path_distances(const WeightedSubgraph& g);

} // namespace eegflow::graph
