#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace oracles {

std::vector<double> direct_one_sided_power(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> bins(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double phase = -2.0 * std::numbers::pi * double(k) * double(t) /
                           double(n);
      re += x[t] * std::cos(phase);
      im += x[t] * std::sin(phase);
    }
    bins[k] = re * re + im * im;
  }
  return bins;
}

std::vector<double> direct_two_sided_power(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> bins(n);
  for (std::size_t k = 0; k < n; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double phase = -2.0 * std::numbers::pi * double(k) * double(t) /
                           double(n);
      re += x[t] * std::cos(phase);
      im += x[t] * std::sin(phase);
    }
    bins[k] = re * re + im * im;
  }
  return bins;
}

Eigen::MatrixXd floyd_warshall(
    const Eigen::MatrixXd& weights,
    const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& present) {
  const auto n = weights.rows();
  const double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(n, n, inf);
  for (Eigen::Index i = 0; i < n; ++i) d(i, i) = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j && present(i, j)) d(i, j) = weights(i, j);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (d(i, k) + d(k, j) < d(i, j)) d(i, j) = d(i, k) + d(k, j);
  return d;
}

namespace {

// Solve the flows implied by a candidate tree basis via leaf elimination;
// returns false when the basis is not a spanning tree or a flow is negative.
bool solve_tree_flows(const std::vector<std::pair<int, int>>& cells,
                      std::vector<double> supply, std::vector<double> demand,
                      double& cost, const Eigen::MatrixXd& c) {
  const int m = int(supply.size());
  const int n = int(demand.size());
  std::vector<int> row_deg(m, 0), col_deg(n, 0);
  std::vector<bool> used(cells.size(), false);
  for (const auto& [i, j] : cells) {
    ++row_deg[i];
    ++col_deg[j];
  }
  cost = 0.0;
  std::size_t remaining = cells.size();
  while (remaining > 0) {
    bool progressed = false;
    for (std::size_t e = 0; e < cells.size(); ++e) {
      if (used[e]) continue;
      const auto [i, j] = cells[e];
      double flow;
      if (row_deg[i] == 1) {
        flow = supply[i];
      } else if (col_deg[j] == 1) {
        flow = demand[j];
      } else {
        continue;
      }
      if (flow < -1e-12) return false;
      used[e] = true;
      --remaining;
      supply[i] -= flow;
      demand[j] -= flow;
      --row_deg[i];
      --col_deg[j];
      cost += flow * c(i, j);
      progressed = true;
    }
    if (!progressed) return false; // cycle: not a tree
  }
  for (double s : supply)
    if (std::abs(s) > 1e-9) return false;
  for (double d : demand)
    if (std::abs(d) > 1e-9) return false;
  return true;
}

} // namespace

double transport_enumerate_vertices(const std::vector<double>& supply,
                                    const std::vector<double>& demand,
                                    const Eigen::MatrixXd& cost) {
  const int m = int(supply.size());
  const int n = int(demand.size());
  const int cells = m * n;
  const int basis_size = m + n - 1;

  std::vector<int> pick(static_cast<std::size_t>(basis_size));
  double best = std::numeric_limits<double>::infinity();

  // enumerate all cell subsets of size m+n-1
  for (int i = 0; i < basis_size; ++i) pick[std::size_t(i)] = i;
  while (true) {
    std::vector<std::pair<int, int>> chosen;
    chosen.reserve(pick.size());
    for (int p : pick) chosen.emplace_back(p / n, p % n);
    double c = 0.0;
    if (solve_tree_flows(chosen, supply, demand, c, cost))
      best = std::min(best, c);

    // next combination
    int pos = basis_size - 1;
    while (pos >= 0 && pick[std::size_t(pos)] == cells - basis_size + pos)
      --pos;
    if (pos < 0) break;
    ++pick[std::size_t(pos)];
    for (int q = pos + 1; q < basis_size; ++q)
      pick[std::size_t(q)] = pick[std::size_t(q - 1)] + 1;
  }
  return best;
}

double transport_successive_paths(const std::vector<double>& supply,
                                  const std::vector<double>& demand,
                                  const Eigen::MatrixXd& cost) {
  const int m = int(supply.size());
  const int n = int(demand.size());
  const int source = m + n;
  const int sink = m + n + 1;
  const int nodes = m + n + 2;
  const double inf = std::numeric_limits<double>::infinity();

  struct Arc {
    int to;
    double cap;
    double cost;
    std::size_t rev;
  };
  std::vector<std::vector<Arc>> g(static_cast<std::size_t>(nodes));
  auto add_arc = [&](int from, int to, double cap, double c) {
    g[std::size_t(from)].push_back({to, cap, c, g[std::size_t(to)].size()});
    g[std::size_t(to)].push_back(
        {from, 0.0, -c, g[std::size_t(from)].size() - 1});
  };
  for (int i = 0; i < m; ++i) add_arc(source, i, supply[std::size_t(i)], 0.0);
  for (int j = 0; j < n; ++j)
    add_arc(m + j, sink, demand[std::size_t(j)], 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) add_arc(i, m + j, inf, cost(i, j));

  double total_cost = 0.0;
  while (true) {
    // Bellman-Ford over the residual graph
    std::vector<double> dist(std::size_t(nodes), inf);
    std::vector<std::pair<int, std::size_t>> parent(
        std::size_t(nodes), {-1, 0});
    dist[std::size_t(source)] = 0.0;
    for (int round = 0; round < nodes; ++round) {
      bool changed = false;
      for (int u = 0; u < nodes; ++u) {
        if (dist[std::size_t(u)] == inf) continue;
        for (std::size_t e = 0; e < g[std::size_t(u)].size(); ++e) {
          const Arc& arc = g[std::size_t(u)][e];
          if (arc.cap <= 1e-15) continue;
          if (dist[std::size_t(u)] + arc.cost <
              dist[std::size_t(arc.to)] - 1e-15) {
            dist[std::size_t(arc.to)] = dist[std::size_t(u)] + arc.cost;
            parent[std::size_t(arc.to)] = {u, e};
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (dist[std::size_t(sink)] == inf) break;

    double push = inf;
    for (int v = sink; v != source;) {
      const auto [u, e] = parent[std::size_t(v)];
      push = std::min(push, g[std::size_t(u)][e].cap);
      v = u;
    }
    for (int v = sink; v != source;) {
      const auto [u, e] = parent[std::size_t(v)];
      g[std::size_t(u)][e].cap -= push;
      g[std::size_t(g[std::size_t(u)][e].to)][g[std::size_t(u)][e].rev].cap +=
          push;
      v = u;
    }
    total_cost += push * dist[std::size_t(sink)];
  }
  return total_cost;
}

double path_eigenvalue(std::size_t m, std::size_t n) {
  return 2.0 - 2.0 * std::cos(std::numbers::pi * double(m) / double(n));
}

Eigen::VectorXd path_eigenvector(std::size_t m, std::size_t n) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    v(Eigen::Index(i)) =
        std::cos(std::numbers::pi * double(m) * (double(i) + 0.5) / double(n));
  v.normalize();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-11) {
      if (v(i) < 0.0) v = -v;
      break;
    }
  }
  return v;
}

Eigen::VectorXd gcn_forward_naive(const eegflow::gcn::GcnParams& params,
                                  const Eigen::MatrixXd& a,
                                  const Eigen::MatrixXd& x) {
  const auto nodes = x.rows();
  const auto d = x.cols();
  auto matmul = [](const Eigen::MatrixXd& p, const Eigen::MatrixXd& q) {
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(p.rows(), q.cols());
    for (Eigen::Index i = 0; i < p.rows(); ++i)
      for (Eigen::Index k = 0; k < p.cols(); ++k)
        for (Eigen::Index j = 0; j < q.cols(); ++j)
          r(i, j) += p(i, k) * q(k, j);
    return r;
  };
  auto relu = [](Eigen::MatrixXd mtx) {
    for (Eigen::Index i = 0; i < mtx.rows(); ++i)
      for (Eigen::Index j = 0; j < mtx.cols(); ++j)
        if (mtx(i, j) < 0.0) mtx(i, j) = 0.0;
    return mtx;
  };

  const Eigen::MatrixXd h1 =
      relu(matmul(matmul(a, x), params.w1)) + matmul(x, params.w_skip1);
  const Eigen::MatrixXd h2 =
      relu(matmul(matmul(a, h1), params.w2)) + matmul(h1, params.w_skip2);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < nodes; ++i) z(j) += h2(i, j);
    z(j) /= double(nodes);
  }
  return z;
}

double distance_loss_naive(const std::vector<Eigen::VectorXd>& z,
                           const Eigen::MatrixXd& target,
                           const eegflow::gcn::PairList& pairs) {
  if (pairs.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& [i, j] : pairs) {
    double sq = 0.0;
    for (Eigen::Index k = 0; k < z[i].size(); ++k) {
      const double d = z[i](k) - z[j](k);
      sq += d * d;
    }
    const double e =
        std::sqrt(sq) - target(Eigen::Index(i), Eigen::Index(j));
    acc += e * e;
  }
  return acc / double(pairs.size());
}

double cnn_forward_naive(const eegflow::clf::CnnParams& params,
                         const Eigen::VectorXd& z) {
  const auto& cfg = params.config;
  const int k = int(cfg.kernel);
  const int off = k / 2;

  // conv1 (1 channel in), relu
  const int len1 = int(cfg.input_dim);
  std::vector<std::vector<double>> c1(cfg.conv1_filters,
                                      std::vector<double>(len1, 0.0));
  for (std::size_t f = 0; f < cfg.conv1_filters; ++f)
    for (int t = 0; t < len1; ++t) {
      double acc = params.conv1_b(Eigen::Index(f));
      for (int kk = 0; kk < k; ++kk) {
        const int src = t + kk - off;
        if (src < 0 || src >= len1) continue;
        acc += params.conv1_w(Eigen::Index(f), kk) * z(src);
      }
      c1[f][std::size_t(t)] = std::max(0.0, acc);
    }

  // pool
  const int len1p = len1 / int(cfg.pool);
  std::vector<std::vector<double>> p1(cfg.conv1_filters,
                                      std::vector<double>(len1p));
  for (std::size_t f = 0; f < cfg.conv1_filters; ++f)
    for (int t = 0; t < len1p; ++t) {
      double best = c1[f][std::size_t(t * int(cfg.pool))];
      for (int q = 1; q < int(cfg.pool); ++q)
        best = std::max(best, c1[f][std::size_t(t * int(cfg.pool) + q)]);
      p1[f][std::size_t(t)] = best;
    }

  // conv2, relu
  std::vector<std::vector<double>> c2(cfg.conv2_filters,
                                      std::vector<double>(len1p, 0.0));
  for (std::size_t f = 0; f < cfg.conv2_filters; ++f)
    for (int t = 0; t < len1p; ++t) {
      double acc = params.conv2_b(Eigen::Index(f));
      for (int kk = 0; kk < k; ++kk) {
        const int src = t + kk - off;
        if (src < 0 || src >= len1p) continue;
        for (std::size_t c = 0; c < cfg.conv1_filters; ++c)
          acc += params.conv2_w[f](Eigen::Index(c), kk) * p1[c][std::size_t(src)];
      }
      c2[f][std::size_t(t)] = std::max(0.0, acc);
    }

  // pool + flatten (filter-major)
  const int len2p = len1p / int(cfg.pool);
  std::vector<double> flat;
  for (std::size_t f = 0; f < cfg.conv2_filters; ++f)
    for (int t = 0; t < len2p; ++t) {
      double best = c2[f][std::size_t(t * int(cfg.pool))];
      for (int q = 1; q < int(cfg.pool); ++q)
        best = std::max(best, c2[f][std::size_t(t * int(cfg.pool) + q)]);
      flat.push_back(best);
    }

  double logit0 = params.dense_b(0), logit1 = params.dense_b(1);
  for (std::size_t i = 0; i < flat.size(); ++i) {
    logit0 += params.dense_w(0, Eigen::Index(i)) * flat[i];
    logit1 += params.dense_w(1, Eigen::Index(i)) * flat[i];
  }
  const double peak = std::max(logit0, logit1);
  const double e0 = std::exp(logit0 - peak);
  const double e1 = std::exp(logit1 - peak);
  return e1 / (e0 + e1);
}

double auroc_pairs(const std::vector<double>& scores,
                   const std::vector<int>& labels) {
  double concordant = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j])
        concordant += 1.0;
      else if (scores[i] == scores[j])
        concordant += 0.5;
    }
  }
  return concordant / double(pairs);
}

} // namespace oracles
