// Independent reference implementations used only by tests. Everything here
// is deliberately written as plain loops, separate from the library's
// production code paths.
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "eegflow/classifier.hpp"
#include "eegflow/gcn.hpp"
#include "eegflow/ricci.hpp"

namespace oracles {

// O(N^2) direct DFT, one-sided squared magnitudes (k = 0..N/2-1).
std::vector<double> direct_one_sided_power(const std::vector<double>& x);

// Full two-sided power spectrum (k = 0..N-1) for the Parseval check.
std::vector<double> direct_two_sided_power(const std::vector<double>& x);

// All-pairs shortest paths by Floyd-Warshall over present edges.
Eigen::MatrixXd floyd_warshall(
    const Eigen::MatrixXd& weights,
    const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& present);

// Exact transportation cost by enumerating every spanning-tree basis of the
// bipartite supply/demand graph. Supports up to ~4x4.
double transport_enumerate_vertices(const std::vector<double>& supply,
                                    const std::vector<double>& demand,
                                    const Eigen::MatrixXd& cost);

// Exact transportation cost by successive shortest augmenting paths
// (Bellman-Ford residual search). Independent of the simplex solver.
double transport_successive_paths(const std::vector<double>& supply,
                                  const std::vector<double>& demand,
                                  const Eigen::MatrixXd& cost);

// Closed-form path-graph Laplacian spectrum: 2 - 2cos(pi m / n).
double path_eigenvalue(std::size_t m, std::size_t n);
// Matching unit eigenvector with the canonical sign.
Eigen::VectorXd path_eigenvector(std::size_t m, std::size_t n);

// Straight-line GCN forward per the two layer formulas, nested loops only.
Eigen::VectorXd gcn_forward_naive(const eegflow::gcn::GcnParams& params,
                                  const Eigen::MatrixXd& a,
                                  const Eigen::MatrixXd& x);

// Mean over pairs of (||z_i - z_j|| - delta_ij)^2 by direct summation.
double distance_loss_naive(const std::vector<Eigen::VectorXd>& z,
                           const Eigen::MatrixXd& target,
                           const eegflow::gcn::PairList& pairs);

// Layer-by-layer CNN forward, plain loops.
double cnn_forward_naive(const eegflow::clf::CnnParams& params,
                         const Eigen::VectorXd& z);

// AUROC by brute-force pair counting, ties counted 1/2.
double auroc_pairs(const std::vector<double>& scores,
                   const std::vector<int>& labels);

} // namespace oracles
