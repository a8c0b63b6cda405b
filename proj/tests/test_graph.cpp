#include <doctest.h>

#include <cmath>

#include "eegflow/manifold_graph.hpp"
#include "eegflow/rng.hpp"
#include "eegflow/signal.hpp"
#include "oracles.hpp"

using namespace eegflow;
using namespace eegflow::graph;

namespace {

NodeVector time_node(std::vector<double> values,
                     const std::string& channel = "FP1") {
  return {channel, Domain::time, std::move(values)};
}

NodeVector freq_node(std::vector<double> values,
                     const std::string& channel = "FP1") {
  return {channel, Domain::freq, std::move(values)};
}

std::vector<double> random_vec(Rng& rng, std::size_t n, double lo = -1.0,
                               double hi = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

spectral::ReducedSample random_sample(Rng& rng, std::size_t d = 32) {
  spectral::ReducedSample s;
  s.event_id = 1;
  s.channel_names = {"FP1", "FP2", "TP9", "TP10"};
  for (std::size_t c = 0; c < 4; ++c) {
    s.time_vecs.push_back(random_vec(rng, d));
    s.freq_vecs.push_back(random_vec(rng, d, 0.0, 5.0));
  }
  return s;
}

} // namespace

TEST_CASE("node_distance metric identities") {
  Rng rng(1);
  const auto v = random_vec(rng, 32);
  CHECK(node_distance(time_node(v), time_node(v, "FP2")) == 0.0);

  const auto f = random_vec(rng, 32, 0.0, 3.0);
  CHECK(node_distance(freq_node(f), freq_node(f, "FP2")) ==
        doctest::Approx(0.0));

  // rho = -1 between anti-affine spectra gives the distance bound 1
  std::vector<double> g(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) g[i] = 10.0 - f[i];
  CHECK(node_distance(freq_node(f), freq_node(g, "FP2")) ==
        doctest::Approx(1.0));
}

TEST_CASE("node_distance time/time is the Euclidean norm") {
  Rng rng(2);
  const auto u = random_vec(rng, 16);
  const auto v = random_vec(rng, 16);
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    acc += (u[i] - v[i]) * (u[i] - v[i]);
  CHECK(node_distance(time_node(u), time_node(v, "FP2")) ==
        doctest::Approx(std::sqrt(acc)));
}

TEST_CASE("node_distance is symmetric, including the mixed case") {
  Rng rng(3);
  MetricOptions opts;
  opts.spectrum_length = 64;
  for (int trial = 0; trial < 10; ++trial) {
    const auto t = time_node(random_vec(rng, 32));
    const auto f = freq_node(random_vec(rng, 32, 0.0, 4.0), "FP2");
    CHECK(node_distance(t, f, opts) == node_distance(f, t, opts));
    CHECK(node_distance(t, f, opts) >= 0.0);
  }
}

TEST_CASE("node_distance mixed case follows the declared formula") {
  Rng rng(4);
  MetricOptions opts;
  opts.spectrum_length = 64;
  const auto tv = random_vec(rng, 32);
  const auto fv = random_vec(rng, 32, 0.1, 4.0);

  std::vector<double> padded(64, 0.0);
  std::copy(tv.begin(), tv.end(), padded.begin());
  const auto lift = spectral::one_sided_power_spectrum(padded).bins;
  const double fft_delta = (1.0 - spectral::pearson(lift, fv)) / 2.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < tv.size(); ++i)
    acc += (tv[i] - fv[i]) * (tv[i] - fv[i]);
  const double want =
      (std::sqrt(acc) / std::sqrt(32.0) + fft_delta) / 2.0;
  CHECK(node_distance(time_node(tv), freq_node(fv, "FP2"), opts) ==
        doctest::Approx(want).epsilon(1e-12));

  MetricOptions raw = opts;
  raw.normalize_mixed = false;
  const double want_raw = (std::sqrt(acc) + fft_delta) / 2.0;
  CHECK(node_distance(time_node(tv), freq_node(fv, "FP2"), raw) ==
        doctest::Approx(want_raw).epsilon(1e-12));
}

TEST_CASE("both-freq distance is bounded in [0, 1]") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = freq_node(random_vec(rng, 24, 0.0, 9.0));
    const auto b = freq_node(random_vec(rng, 24, 0.0, 9.0), "FP2");
    const double d = node_distance(a, b);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
  }
}

TEST_CASE("build_subgraph produces the normative complete 8-node graph") {
  Rng rng(6);
  MetricOptions opts;
  opts.spectrum_length = 64;
  const auto sample = random_sample(rng);
  const auto g = build_subgraph(sample, opts);
  CHECK(g.size() == 8);
  CHECK(g.node_names() == std::vector<std::string>{"FP1_t", "FP2_t", "TP9_t",
                                                   "TP10_t", "FP1_f", "FP2_f",
                                                   "TP9_f", "TP10_f"});
  CHECK(g.present_edge_count() == 28);
  for (Eigen::Index i = 0; i < 8; ++i) {
    CHECK(g.weights(i, i) == 0.0);
    CHECK_FALSE(g.edge_present(i, i));
    for (Eigen::Index j = 0; j < 8; ++j) {
      CHECK(g.weights(i, j) == g.weights(j, i));
      if (i != j) {
        CHECK(g.edge_present(i, j));
        CHECK(g.weights(i, j) >= 0.0);
      }
    }
  }

  // deterministic pure function of the sample
  const auto again = build_subgraph(sample, opts);
  CHECK((again.weights - g.weights).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("build_subgraph with flat and mirrored inputs") {
  // all-equal time vectors and all-equal freq vectors: time-time and
  // freq-freq distances vanish, mixed distances coincide across pairs
  spectral::ReducedSample s;
  s.channel_names = {"FP1", "FP2", "TP9", "TP10"};
  std::vector<double> tv(32), fv(32);
  for (std::size_t i = 0; i < 32; ++i) {
    tv[i] = std::sin(0.2 * double(i));
    fv[i] = 1.0 + std::cos(0.4 * double(i));
  }
  for (int c = 0; c < 4; ++c) {
    s.time_vecs.push_back(tv);
    s.freq_vecs.push_back(fv);
  }
  MetricOptions opts;
  opts.spectrum_length = 64;
  const auto g = build_subgraph(s, opts);
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = i + 1; j < 4; ++j) {
      CHECK(g.weights(i, j) == doctest::Approx(0.0));         // time-time
      CHECK(g.weights(i + 4, j + 4) == doctest::Approx(0.0)); // freq-freq
    }
  const double mixed = g.weights(0, 4);
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 4; j < 8; ++j)
      CHECK(g.weights(i, j) == doctest::Approx(mixed));
}

TEST_CASE("shortest_path_distances equals weights on metric complete graphs") {
  Rng rng(7);
  MetricOptions opts;
  opts.spectrum_length = 64;
  const auto g = build_subgraph(random_sample(rng), opts);
  const auto sp = shortest_path_distances(g);
  const auto oracle = oracles::floyd_warshall(g.weights, g.edge_present);
  CHECK((sp - oracle).cwiseAbs().maxCoeff() < 1e-12);
  // shortest path never exceeds the direct edge
  for (Eigen::Index i = 0; i < 8; ++i)
    for (Eigen::Index j = 0; j < 8; ++j)
      if (i != j) CHECK(sp(i, j) <= g.weights(i, j) + 1e-15);
}

TEST_CASE("shortest_path_distances on sparse graphs") {
  WeightedSubgraph g;
  g.nodes.resize(4);
  for (std::size_t i = 0; i < 4; ++i)
    g.nodes[i] = {"C" + std::to_string(i), Domain::time, {}};
  g.weights = Eigen::MatrixXd::Zero(4, 4);
  g.edge_present.setConstant(4, 4, false);
  auto connect = [&](int i, int j, double w) {
    g.weights(i, j) = g.weights(j, i) = w;
    g.edge_present(i, j) = g.edge_present(j, i) = true;
  };

  SUBCASE("single edge") {
    connect(0, 1, 3.0);
    const auto sp = shortest_path_distances(g);
    CHECK(sp(0, 1) == 3.0);
    CHECK(sp(1, 0) == 3.0);
    CHECK(std::isinf(sp(0, 2)));
    CHECK(std::isinf(sp(2, 3)));
    CHECK(sp(2, 2) == 0.0);
  }

  SUBCASE("two-hop path") {
    connect(0, 1, 1.0);
    connect(1, 2, 1.0);
    const auto sp = shortest_path_distances(g);
    CHECK(sp(0, 2) == 2.0);
    CHECK(std::isinf(sp(0, 3)));
  }
}

TEST_CASE("shortest_path oracle agreement on random sparse graphs") {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    WeightedSubgraph g;
    const std::size_t n = 5 + rng.index(4);
    g.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      g.nodes[i] = {"C" + std::to_string(i), Domain::time, {}};
    g.weights = Eigen::MatrixXd::Zero(Eigen::Index(n), Eigen::Index(n));
    g.edge_present.setConstant(Eigen::Index(n), Eigen::Index(n), false);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (rng.uniform() < 0.5) {
          const double w = rng.uniform(0.1, 5.0);
          g.weights(Eigen::Index(i), Eigen::Index(j)) = w;
          g.weights(Eigen::Index(j), Eigen::Index(i)) = w;
          g.edge_present(Eigen::Index(i), Eigen::Index(j)) = true;
          g.edge_present(Eigen::Index(j), Eigen::Index(i)) = true;
        }
    const auto sp = shortest_path_distances(g);
    const auto fw = oracles::floyd_warshall(g.weights, g.edge_present);
    for (Eigen::Index i = 0; i < Eigen::Index(n); ++i)
      for (Eigen::Index j = 0; j < Eigen::Index(n); ++j) {
        if (std::isinf(fw(i, j)))
          CHECK(std::isinf(sp(i, j)));
        else
          CHECK(sp(i, j) == doctest::Approx(fw(i, j)).epsilon(1e-12));
      }
  }
}

TEST_CASE("subgraph bookkeeping: samples x 64 adjacency entries") {
  Rng rng(9);
  MetricOptions opts;
  opts.spectrum_length = 64;
  std::size_t entries = 0;
  for (int s = 0; s < 25; ++s) {
    const auto g = build_subgraph(random_sample(rng), opts);
    entries += std::size_t(g.weights.rows() * g.weights.cols());
  }
  CHECK(entries == 25 * 64);
}
