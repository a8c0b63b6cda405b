#include "eegflow/manifold_graph.hpp"

#include <cmath>
#include <limits>
#include <queue>

namespace eegflow::graph {

std::size_t WeightedSubgraph::present_edge_count() const {
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < edge_present.rows(); ++i)
    for (Eigen::Index j = i + 1; j < edge_present.cols(); ++j)
      if (edge_present(i, j)) ++count;
  return count;
}

std::vector<std::string> WeightedSubgraph::node_names() const {
  std::vector<std::string> names;
  names.reserve(nodes.size());
  for (const auto& n : nodes)
    names.push_back(n.channel + (n.domain == Domain::time ? "_t" : "_f"));
  return names;
}

namespace {

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

double correlation_distance(const std::vector<double>& a,
                            const std::vector<double>& b) {
  return (1.0 - spectral::pearson(a, b)) / 2.0;
}

std::vector<double> lifted_spectrum(const std::vector<double>& time_values,
                                    std::size_t length) {
  std::vector<double> padded(length, 0.0);
  std::copy(time_values.begin(), time_values.end(), padded.begin());
  return spectral::one_sided_power_spectrum(padded).bins;
}

} // namespace

double node_distance(const NodeVector& u, const NodeVector& v,
                     const MetricOptions& options) {
  if (u.values.size() != v.values.size())
    throw ShapeError("node_distance: value length mismatch");

  if (u.domain == Domain::time && v.domain == Domain::time)
    return euclidean(u.values, v.values);
  if (u.domain == Domain::freq && v.domain == Domain::freq)
    return correlation_distance(u.values, v.values);

  const NodeVector& t = u.domain == Domain::time ? u : v;
  const NodeVector& f = u.domain == Domain::time ? v : u;
  if (t.values.size() > options.spectrum_length)
    throw ShapeError("node_distance: spectrum lift shorter than the signal");
  const double scale =
      options.normalize_mixed ? std::sqrt(double(t.values.size())) : 1.0;
  const double fft_delta = correlation_distance(
      lifted_spectrum(t.values, options.spectrum_length), f.values);
  return (euclidean(u.values, v.values) / scale + fft_delta) / 2.0;
}

WeightedSubgraph build_subgraph(const spectral::ReducedSample& sample,
                                const MetricOptions& options) {
  const std::size_t c = sample.channel_names.size();
  WeightedSubgraph g;
  g.nodes.reserve(2 * c);
  for (std::size_t i = 0; i < c; ++i)
    g.nodes.push_back(
        {sample.channel_names[i], Domain::time, sample.time_vecs[i]});
  for (std::size_t i = 0; i < c; ++i)
    g.nodes.push_back(
        {sample.channel_names[i], Domain::freq, sample.freq_vecs[i]});

  const auto n = Eigen::Index(g.nodes.size());
  g.weights = Eigen::MatrixXd::Zero(n, n);
  g.edge_present.setConstant(n, n, false);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = node_distance(g.nodes[std::size_t(i)],
                                     g.nodes[std::size_t(j)], options);
      g.weights(i, j) = d;
      g.weights(j, i) = d;
      g.edge_present(i, j) = true;
      g.edge_present(j, i) = true;
    }
  return g;
}

Eigen::MatrixXd shortest_path_distances(const WeightedSubgraph& g) {
  const auto n = Eigen::Index(g.size());
  const double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd dist = Eigen::MatrixXd::Constant(n, n, inf);

  // Dijkstra from each source; the graphs are tiny but sparse after cutting.
  using Item = std::pair<double, Eigen::Index>;
  for (Eigen::Index src = 0; src < n; ++src) {
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist(src, src) = 0.0;
    queue.emplace(0.0, src);
    while (!queue.empty()) {
      const auto [d, u] = queue.top();
      queue.pop();
      if (d > dist(src, u)) continue;
      for (Eigen::Index v = 0; v < n; ++v) {
        if (v == u || !g.edge_present(u, v)) continue;
        const double cand = d + g.weights(u, v);
        if (cand < dist(src, v)) {
          dist(src, v) = cand;
          queue.emplace(cand, v);
        }
      }
    }
  }
  return dist;
}

} // namespace eegflow::graph
