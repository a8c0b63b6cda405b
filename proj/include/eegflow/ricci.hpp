#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eegflow/errors.hpp"
#include "eegflow/manifold_graph.hpp"

namespace eegflow::ricci {

/// Probability mass placed on a node's neighborhood: `idleness` stays at the
/// node, the rest is spread uniformly over present neighbors.
struct NeighborMeasure {
  std::vector<std::size_t> support; // ascending node indices
  std::vector<double> mass;         // aligned, sums to 1
};

NeighborMeasure neighbor_measure(const graph::WeightedSubgraph& g,
                                 std::size_t u, double idleness = 0.0);

/// Exact Wasserstein-1 cost between two neighbor measures; `ground` is
/// indexed by node id and must be finite over the supports. Solved with a
/// transportation simplex (Bland's rule), which is exact at these sizes.
double wasserstein1(const NeighborMeasure& mu, const NeighborMeasure& nu,
                    const Eigen::MatrixXd& ground);

struct CurvatureOptions {
  double idleness = 0.0;
  double epsilon = 1e-12; // edges at or below this length are degenerate
};

/// kappa(u,v) = 1 - W1(mu_u, mu_v) / d(u,v) with d the current edge weight
/// and the ground metric the current shortest-path distances.
double ollivier_ricci(const graph::WeightedSubgraph& g, std::size_t u,
                      std::size_t v, const CurvatureOptions& options = {});

struct CurvatureMap {
  Eigen::MatrixXd kappa; // symmetric; meaningful where edge_present
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> edge_present;
};

/// Curvatures for every present edge on a frozen state. Degenerate edges are
/// clamped to `epsilon` and counted instead of aborting the flow.
CurvatureMap curvature_map(const graph::WeightedSubgraph& g,
                           const CurvatureOptions& options = {},
                           std::size_t* degenerate_warnings = nullptr);

struct FlowOptions {
  double alpha = 0.5;
  double idleness = 0.0;
  std::size_t iterations = 10;
  double epsilon = 1e-12;
  double weight_min = 1e-9;
  double weight_max = 1e9;
};

/// One synchronized update: all curvatures from state t, then
/// w <- w * exp(-alpha * kappa) committed at once.
graph::WeightedSubgraph flow_step(const graph::WeightedSubgraph& g,
                                  const FlowOptions& options = {},
                                  std::size_t* degenerate_warnings = nullptr);

struct FlowTrajectory {
  std::vector<Eigen::MatrixXd> states; // t = 0..iterations
  std::vector<CurvatureMap> curvatures;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> edge_present;
  std::vector<std::string> node_names;
  double alpha = 0.5;
  std::size_t degenerate_warnings = 0;
};

FlowTrajectory evolve(const graph::WeightedSubgraph& g,
                      const FlowOptions& options = {});

/// Final graph of a trajectory (last state, same topology).
graph::WeightedSubgraph final_state(const graph::WeightedSubgraph& g,
                                    const FlowTrajectory& trajectory);

/// Remove exactly ceil(rho * |E|) heaviest edges. Ties break by (min,max)
/// node index: the lower-indexed edge survives longer.
graph::WeightedSubgraph cut_edges(const graph::WeightedSubgraph& g,
                                  double rho = 0.6);

enum class AggregationMode { over_subgraphs, over_iterations };

struct CompositeAdjacency {
  Eigen::MatrixXd matrix;
  std::size_t source_count = 0;
  AggregationMode mode = AggregationMode::over_subgraphs;
  std::vector<std::string> node_names;
};

/// Entrywise mean of the graphs' weight matrices; absent edges contribute 0.
CompositeAdjacency
aggregate_adjacency(const std::vector<graph::WeightedSubgraph>& graphs,
                    AggregationMode mode = AggregationMode::over_subgraphs);

/// Per-iteration snapshots of one trajectory as graphs (t = 1..T), for the
/// over-iterations aggregation mode.
std::vector<graph::WeightedSubgraph>
iteration_graphs(const graph::WeightedSubgraph& g,
                 const FlowTrajectory& trajectory);

struct WeightHistogram {
  std::vector<std::size_t> counts;
  double lo = 0.0;
  double hi = 0.0;
};

WeightHistogram weight_histogram(
    const Eigen::MatrixXd& weights,
    const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& edge_present,
    std::size_t bins = 32);

} // namespace eegflow::ricci
