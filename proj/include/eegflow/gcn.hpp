#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "eegflow/errors.hpp"

namespace eegflow::gcn {

/// Two-layer graph convolution with per-layer skip connections:
///   H1 = relu(A X W1) + X Wskip1
///   H2 = relu(A H1 W2) + H1 Wskip2
///   z  = column mean of H2 (8-to-1 readout)
struct GcnParams {
  Eigen::MatrixXd w1, w_skip1, w2, w_skip2; // all dim x dim

  Eigen::Index dim() const { return w1.rows(); }
  static GcnParams zeros(Eigen::Index dim);
  /// Symmetric uniform init scaled by 1/sqrt(fan-in), seeded.
  static GcnParams init(Eigen::Index dim, std::uint64_t seed);
  bool all_finite() const;
};

struct GcnForward {
  Eigen::MatrixXd h1, h2;
  Eigen::VectorXd z;
};

GcnForward gcn_forward(const GcnParams& params, const Eigen::MatrixXd& a,
                       const Eigen::MatrixXd& x);

Eigen::VectorXd embed(const GcnParams& params, const Eigen::MatrixXd& a,
                      const Eigen::MatrixXd& x);

using PairList = std::vector<std::pair<std::size_t, std::size_t>>;

/// Mean over pairs of (||z_i - z_j|| - delta_ij)^2. An empty pair list means
/// all unordered pairs i < j.
double distance_loss(const std::vector<Eigen::VectorXd>& embeddings,
                     const Eigen::MatrixXd& target,
                     const PairList& pairs = {});

struct GcnGradients {
  Eigen::MatrixXd w1, w_skip1, w2, w_skip2;
};

/// Analytic gradients of distance_loss through the forward pass; the
/// rectifier subgradient at 0 is 0.
GcnGradients gcn_gradient(const GcnParams& params,
                          const std::vector<Eigen::MatrixXd>& batch,
                          const Eigen::MatrixXd& a,
                          const Eigen::MatrixXd& target,
                          const PairList& pairs = {});

struct GcnTrainConfig {
  std::size_t epochs = 100;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::size_t pair_sample_count = 256; // pairs drawn per epoch
  std::size_t batch_pairs = 8;         // pairs per optimizer step
  std::uint64_t seed = 1;
};

struct GcnTrainResult {
  GcnParams params;
  std::vector<double> loss_curve; // one mean sampled-pair loss per epoch
  Eigen::MatrixXd target;         // the rescaled distance target used
};

/// Distance-preserving training: the target delta_ij is the Frobenius
/// distance between feature matrices, rescaled so its mean over all training
/// pairs is 1. Deterministic for a fixed (dataset order, seed, config).
GcnTrainResult train_gcn(const std::vector<Eigen::MatrixXd>& features,
                         const Eigen::MatrixXd& a,
                         const GcnTrainConfig& config = {});

/// delta matrix (before rescaling divide by mean; returns both).
Eigen::MatrixXd pairwise_frobenius(const std::vector<Eigen::MatrixXd>& x);

} // namespace eegflow::gcn
