#include "eegflow/ricci.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eegflow::ricci {

NeighborMeasure neighbor_measure(const graph::WeightedSubgraph& g,
                                 std::size_t u, double idleness) {
  if (u >= g.size()) throw ShapeError("neighbor_measure: node out of range");
  if (idleness < 0.0 || idleness >= 1.0)
    throw ShapeError("neighbor_measure: idleness must be in [0, 1)");

  std::vector<std::size_t> neighbors;
  for (std::size_t v = 0; v < g.size(); ++v)
    if (v != u && g.edge_present(Eigen::Index(u), Eigen::Index(v)))
      neighbors.push_back(v);
  if (neighbors.empty()) throw IsolatedNodeError(u);

  NeighborMeasure m;
  const double share = (1.0 - idleness) / double(neighbors.size());
  for (std::size_t v : neighbors) {
    if (idleness > 0.0 && u < v &&
        (m.support.empty() || m.support.back() < u)) {
      m.support.push_back(u);
      m.mass.push_back(idleness);
    }
    m.support.push_back(v);
    m.mass.push_back(share);
  }
  if (idleness > 0.0 && (m.support.empty() || m.support.back() < u)) {
    m.support.push_back(u);
    m.mass.push_back(idleness);
  }
  return m;
}

namespace {

// Transportation simplex on the bipartite supply/demand problem. Bland's
// pivoting rule (lowest-index entering and leaving arc) rules out cycling
// through the degenerate bases that uniform neighbor measures produce.
class TransportSimplex {
public:
  TransportSimplex(std::vector<double> supply, std::vector<double> demand,
                   const Eigen::MatrixXd& cost)
      : supply_(std::move(supply)), demand_(std::move(demand)), cost_(cost),
        m_(supply_.size()), n_(demand_.size()),
        flow_(Eigen::MatrixXd::Zero(Eigen::Index(m_), Eigen::Index(n_))) {
    basic_.setConstant(Eigen::Index(m_), Eigen::Index(n_), false);
    northwest_corner();
    const double scale = 1.0 + cost_.cwiseAbs().maxCoeff();
    pivot_tol_ = 1e-12 * scale;
  }

  double solve() {
    const std::size_t max_pivots = 200 * (m_ + n_) + 1000;
    for (std::size_t pivot = 0; pivot < max_pivots; ++pivot) {
      compute_duals();
      std::size_t ei = 0, ej = 0;
      if (!find_entering(ei, ej)) {
        double total = 0.0;
        for (std::size_t i = 0; i < m_; ++i)
          for (std::size_t j = 0; j < n_; ++j)
            if (basic_(Eigen::Index(i), Eigen::Index(j)))
              total +=
                  flow_(Eigen::Index(i), Eigen::Index(j)) * cost_value(i, j);
        return total;
      }
      pivot_on(ei, ej);
    }
    throw InfeasibleError("wasserstein1: simplex failed to terminate");
  }

private:
  double cost_value(std::size_t i, std::size_t j) const {
    return cost_(Eigen::Index(i), Eigen::Index(j));
  }

  void northwest_corner() {
    std::vector<double> a = supply_;
    std::vector<double> b = demand_;
    std::size_t i = 0, j = 0;
    while (true) {
      const double t = std::min(a[i], b[j]);
      flow_(Eigen::Index(i), Eigen::Index(j)) = t;
      basic_(Eigen::Index(i), Eigen::Index(j)) = true;
      a[i] -= t;
      b[j] -= t;
      if (i == m_ - 1 && j == n_ - 1) break;
      if (a[i] <= 0.0 && i < m_ - 1)
        ++i;
      else
        ++j;
    }
  }

  void compute_duals() {
    u_.assign(m_, std::numeric_limits<double>::quiet_NaN());
    v_.assign(n_, std::numeric_limits<double>::quiet_NaN());
    u_[0] = 0.0;
    // propagate across the basis tree until all duals are fixed
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < m_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
          if (!basic_(Eigen::Index(i), Eigen::Index(j))) continue;
          if (!std::isnan(u_[i]) && std::isnan(v_[j])) {
            v_[j] = cost_value(i, j) - u_[i];
            changed = true;
          } else if (std::isnan(u_[i]) && !std::isnan(v_[j])) {
            u_[i] = cost_value(i, j) - v_[j];
            changed = true;
          }
        }
    }
  }

  bool find_entering(std::size_t& ei, std::size_t& ej) const {
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        if (basic_(Eigen::Index(i), Eigen::Index(j))) continue;
        if (cost_value(i, j) - u_[i] - v_[j] < -pivot_tol_) {
          ei = i;
          ej = j;
          return true;
        }
      }
    return false;
  }

  // The unique alternating cycle created by the entering cell: found by a
  // depth-first search over basic cells, rows and columns alternating.
  bool find_cycle_from_row(std::size_t row, std::size_t target_col,
                           std::vector<std::pair<std::size_t, std::size_t>>&
                               path) const {
    for (std::size_t j = 0; j < n_; ++j) {
      if (!basic_(Eigen::Index(row), Eigen::Index(j))) continue;
      if (!path.empty() && path.back().second == j) continue;
      path.emplace_back(row, j);
      if (j == target_col) return true;
      if (find_cycle_from_col(j, target_col, path)) return true;
      path.pop_back();
    }
    return false;
  }

  bool find_cycle_from_col(std::size_t col, std::size_t target_col,
                           std::vector<std::pair<std::size_t, std::size_t>>&
                               path) const {
    for (std::size_t i = 0; i < m_; ++i) {
      if (!basic_(Eigen::Index(i), Eigen::Index(col))) continue;
      if (!path.empty() && path.back().first == i) continue;
      path.emplace_back(i, col);
      if (find_cycle_from_row(i, target_col, path)) return true;
      path.pop_back();
    }
    return false;
  }

  void pivot_on(std::size_t ei, std::size_t ej) {
    // cells alternate +,-,+,- around the cycle starting from the entering one
    std::vector<std::pair<std::size_t, std::size_t>> path;
    if (!find_cycle_from_row(ei, ej, path))
      throw InfeasibleError("wasserstein1: basis lost its tree structure");
    std::vector<std::pair<std::size_t, std::size_t>> cycle;
    cycle.emplace_back(ei, ej);
    for (auto it = path.rbegin(); it != path.rend(); ++it) cycle.push_back(*it);

    double theta = std::numeric_limits<double>::infinity();
    std::size_t leave = 1;
    for (std::size_t p = 1; p < cycle.size(); p += 2) {
      const double f =
          flow_(Eigen::Index(cycle[p].first), Eigen::Index(cycle[p].second));
      // Bland's rule: among minimal-flow cells the lexicographically
      // smallest leaves, which rules out cycling on degenerate bases.
      if (f < theta || (f == theta && cycle[p] < cycle[leave])) {
        theta = f;
        leave = p;
      }
    }
    for (std::size_t p = 0; p < cycle.size(); ++p) {
      auto& f =
          flow_(Eigen::Index(cycle[p].first), Eigen::Index(cycle[p].second));
      f += (p % 2 == 0) ? theta : -theta;
    }
    basic_(Eigen::Index(cycle[leave].first),
           Eigen::Index(cycle[leave].second)) = false;
    flow_(Eigen::Index(cycle[leave].first),
          Eigen::Index(cycle[leave].second)) = 0.0;
    basic_(Eigen::Index(ei), Eigen::Index(ej)) = true;
  }

  std::vector<double> supply_;
  std::vector<double> demand_;
  const Eigen::MatrixXd& cost_;
  std::size_t m_;
  std::size_t n_;
  Eigen::MatrixXd flow_;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> basic_;
  std::vector<double> u_;
  std::vector<double> v_;
  double pivot_tol_ = 1e-12;
};

} // namespace

double wasserstein1(const NeighborMeasure& mu, const NeighborMeasure& nu,
                    const Eigen::MatrixXd& ground) {
  if (mu.support.size() != mu.mass.size() ||
      nu.support.size() != nu.mass.size())
    throw ShapeError("wasserstein1: support/mass size mismatch");

  double sum_mu = 0.0, sum_nu = 0.0;
  for (double x : mu.mass) {
    if (x < 0.0) throw InfeasibleError("wasserstein1: negative mass");
    sum_mu += x;
  }
  for (double x : nu.mass) {
    if (x < 0.0) throw InfeasibleError("wasserstein1: negative mass");
    sum_nu += x;
  }
  if (std::abs(sum_mu - 1.0) > 1e-9 || std::abs(sum_nu - 1.0) > 1e-9)
    throw InfeasibleError("wasserstein1: measures are not normalized");

  std::vector<double> supply;
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < mu.mass.size(); ++i)
    if (mu.mass[i] > 0.0) {
      supply.push_back(mu.mass[i]);
      rows.push_back(mu.support[i]);
    }
  std::vector<double> demand;
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < nu.mass.size(); ++j)
    if (nu.mass[j] > 0.0) {
      demand.push_back(nu.mass[j] * (sum_mu / sum_nu));
      cols.push_back(nu.support[j]);
    }
  if (supply.empty() || demand.empty())
    throw InfeasibleError("wasserstein1: empty measure");

  Eigen::MatrixXd cost(Eigen::Index(supply.size()),
                       Eigen::Index(demand.size()));
  for (std::size_t i = 0; i < supply.size(); ++i)
    for (std::size_t j = 0; j < demand.size(); ++j) {
      const double d =
          ground(Eigen::Index(rows[i]), Eigen::Index(cols[j]));
      if (!std::isfinite(d))
        throw InfeasibleError("wasserstein1: ground distance is not finite "
                              "over the supports");
      cost(Eigen::Index(i), Eigen::Index(j)) = d;
    }

  return TransportSimplex(std::move(supply), std::move(demand), cost).solve();
}

double ollivier_ricci(const graph::WeightedSubgraph& g, std::size_t u,
                      std::size_t v, const CurvatureOptions& options) {
  if (u >= g.size() || v >= g.size() || u == v ||
      !g.edge_present(Eigen::Index(u), Eigen::Index(v)))
    throw ShapeError("ollivier_ricci: edge not present");
  const double d = g.weights(Eigen::Index(u), Eigen::Index(v));
  if (d <= options.epsilon) throw DegenerateEdgeError(u, v, d);

  const Eigen::MatrixXd ground = graph::shortest_path_distances(g);
  const auto mu = neighbor_measure(g, u, options.idleness);
  const auto nu = neighbor_measure(g, v, options.idleness);
  return 1.0 - wasserstein1(mu, nu, ground) / d;
}

CurvatureMap curvature_map(const graph::WeightedSubgraph& g,
                           const CurvatureOptions& options,
                           std::size_t* degenerate_warnings) {
  const auto n = Eigen::Index(g.size());
  CurvatureMap map;
  map.kappa = Eigen::MatrixXd::Zero(n, n);
  map.edge_present = g.edge_present;

  const Eigen::MatrixXd ground = graph::shortest_path_distances(g);
  std::vector<NeighborMeasure> measures(g.size());
  for (std::size_t u = 0; u < g.size(); ++u) {
    bool any = false;
    for (std::size_t v = 0; v < g.size() && !any; ++v)
      any = v != u && g.edge_present(Eigen::Index(u), Eigen::Index(v));
    if (any) measures[u] = neighbor_measure(g, u, options.idleness);
  }

  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (!g.edge_present(i, j)) continue;
      double d = g.weights(i, j);
      if (d <= options.epsilon) {
        d = options.epsilon;
        if (degenerate_warnings) ++*degenerate_warnings;
      }
      const double w1 = wasserstein1(measures[std::size_t(i)],
                                     measures[std::size_t(j)], ground);
      const double kappa = 1.0 - w1 / d;
      map.kappa(i, j) = kappa;
      map.kappa(j, i) = kappa;
    }
  return map;
}

graph::WeightedSubgraph flow_step(const graph::WeightedSubgraph& g,
                                  const FlowOptions& options,
                                  std::size_t* degenerate_warnings) {
  if (options.alpha <= 0.0) throw ShapeError("flow_step: alpha must be > 0");
  CurvatureOptions copt{options.idleness, options.epsilon};
  const CurvatureMap map = curvature_map(g, copt, degenerate_warnings);

  graph::WeightedSubgraph out = g;
  const auto n = Eigen::Index(g.size());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (!g.edge_present(i, j)) continue;
      const double w =
          g.weights(i, j) * std::exp(-options.alpha * map.kappa(i, j));
      const double clamped =
          std::clamp(w, options.weight_min, options.weight_max);
      out.weights(i, j) = clamped;
      out.weights(j, i) = clamped;
    }
  return out;
}

FlowTrajectory evolve(const graph::WeightedSubgraph& g,
                      const FlowOptions& options) {
  if (options.iterations < 1)
    throw ShapeError("evolve: iterations must be >= 1");

  FlowTrajectory trajectory;
  trajectory.alpha = options.alpha;
  trajectory.edge_present = g.edge_present;
  trajectory.node_names = g.node_names();
  trajectory.states.reserve(options.iterations + 1);
  trajectory.states.push_back(g.weights);

  graph::WeightedSubgraph current = g;
  for (std::size_t t = 0; t < options.iterations; ++t) {
    CurvatureOptions copt{options.idleness, options.epsilon};
    trajectory.curvatures.push_back(
        curvature_map(current, copt, &trajectory.degenerate_warnings));
    const auto& map = trajectory.curvatures.back();
    const auto n = Eigen::Index(current.size());
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) {
        if (!current.edge_present(i, j)) continue;
        const double w = current.weights(i, j) *
                         std::exp(-options.alpha * map.kappa(i, j));
        const double clamped =
            std::clamp(w, options.weight_min, options.weight_max);
        current.weights(i, j) = clamped;
        current.weights(j, i) = clamped;
      }
    trajectory.states.push_back(current.weights);
  }
  return trajectory;
}

graph::WeightedSubgraph final_state(const graph::WeightedSubgraph& g,
                                    const FlowTrajectory& trajectory) {
  graph::WeightedSubgraph out = g;
  out.weights = trajectory.states.back();
  out.edge_present = trajectory.edge_present;
  return out;
}

graph::WeightedSubgraph cut_edges(const graph::WeightedSubgraph& g,
                                  double rho) {
  if (rho < 0.0 || rho > 1.0)
    throw ShapeError("cut_edges: rho must be in [0, 1]");

  struct Edge {
    double weight;
    std::size_t i, j;
  };
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      if (g.edge_present(Eigen::Index(i), Eigen::Index(j)))
        edges.push_back({g.weights(Eigen::Index(i), Eigen::Index(j)), i, j});

  // ceil(rho * |E|) with a guard against binary representation drift
  const double t = rho * double(edges.size());
  auto cut_count = std::size_t(std::ceil(t - 1e-9));
  cut_count = std::min(cut_count, edges.size());

  // heaviest first; among ties the higher-indexed edge is removed first, so
  // the lower-indexed one survives longer
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    if (a.i != b.i) return a.i > b.i;
    return a.j > b.j;
  });

  graph::WeightedSubgraph out = g;
  for (std::size_t e = 0; e < cut_count; ++e) {
    out.edge_present(Eigen::Index(edges[e].i), Eigen::Index(edges[e].j)) =
        false;
    out.edge_present(Eigen::Index(edges[e].j), Eigen::Index(edges[e].i)) =
        false;
    out.weights(Eigen::Index(edges[e].i), Eigen::Index(edges[e].j)) = 0.0;
    out.weights(Eigen::Index(edges[e].j), Eigen::Index(edges[e].i)) = 0.0;
  }
  return out;
}

CompositeAdjacency
aggregate_adjacency(const std::vector<graph::WeightedSubgraph>& graphs,
                    AggregationMode mode) {
  if (graphs.empty())
    throw ShapeError("aggregate_adjacency: no graphs to aggregate");
  const auto names = graphs.front().node_names();
  const auto n = Eigen::Index(graphs.front().size());

  CompositeAdjacency out;
  out.matrix = Eigen::MatrixXd::Zero(n, n);
  out.source_count = graphs.size();
  out.mode = mode;
  out.node_names = names;

  for (const auto& g : graphs) {
    if (g.node_names() != names)
      throw OrderMismatchError(
          "aggregate_adjacency: node order differs between subgraphs");
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j && g.edge_present(i, j)) out.matrix(i, j) += g.weights(i, j);
  }
  out.matrix /= double(graphs.size());
  return out;
}

std::vector<graph::WeightedSubgraph>
iteration_graphs(const graph::WeightedSubgraph& g,
                 const FlowTrajectory& trajectory) {
  std::vector<graph::WeightedSubgraph> out;
  out.reserve(trajectory.states.size() - 1);
  for (std::size_t t = 1; t < trajectory.states.size(); ++t) {
    graph::WeightedSubgraph snapshot = g;
    snapshot.weights = trajectory.states[t];
    snapshot.edge_present = trajectory.edge_present;
    out.push_back(std::move(snapshot));
  }
  return out;
}

WeightHistogram weight_histogram(
    const Eigen::MatrixXd& weights,
    const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& edge_present,
    std::size_t bins) {
  if (bins == 0) throw ShapeError("weight_histogram: bins must be >= 1");
  WeightHistogram h;
  h.counts.assign(bins, 0);

  std::vector<double> values;
  for (Eigen::Index i = 0; i < weights.rows(); ++i)
    for (Eigen::Index j = i + 1; j < weights.cols(); ++j)
      if (edge_present(i, j)) values.push_back(weights(i, j));
  if (values.empty()) return h;

  h.lo = *std::min_element(values.begin(), values.end());
  h.hi = *std::max_element(values.begin(), values.end());
  const double span = h.hi - h.lo;
  for (double v : values) {
    std::size_t bin = 0;
    if (span > 0.0)
      bin = std::min(bins - 1, std::size_t((v - h.lo) / span * double(bins)));
    ++h.counts[bin];
  }
  return h;
}

} // namespace eegflow::ricci
