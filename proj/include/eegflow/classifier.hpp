#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eegflow/errors.hpp"

namespace eegflow::clf {

/// Lightweight 1D CNN over the 256-dim embedding:
/// conv(5) -> relu -> maxpool(2) -> conv(5) -> relu -> maxpool(2)
/// -> flatten -> dense(2) -> softmax. Filter counts (16, 24) put the
/// parameter total at 5114, next to the intended ~5.2K.
struct CnnConfig {
  std::size_t input_dim = 256;
  std::size_t conv1_filters = 16;
  std::size_t conv2_filters = 24;
  std::size_t kernel = 5;
  std::size_t pool = 2;
};

struct CnnParams {
  CnnConfig config;
  Eigen::MatrixXd conv1_w; // filters x kernel
  Eigen::VectorXd conv1_b;
  std::vector<Eigen::MatrixXd> conv2_w; // per filter: in_channels x kernel
  Eigen::VectorXd conv2_b;
  Eigen::MatrixXd dense_w; // 2 x flattened
  Eigen::VectorXd dense_b; // 2

  static CnnParams zeros(const CnnConfig& config = {});
  static CnnParams init(std::uint64_t seed, const CnnConfig& config = {});
  std::size_t parameter_count() const;
  bool all_finite() const;
};

/// Probability that the sample is the digit (positive) class.
double cnn_forward(const CnnParams& params, const Eigen::VectorXd& z);

struct ClfTrainConfig {
  double learning_rate = 0.01;
  std::size_t epochs = 70;
  std::size_t batch_size = 80;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t seed = 1;
};

struct ClfTrainResult {
  CnnParams params;
  std::vector<double> loss_curve; // mean cross-entropy per epoch
};

/// Cross-entropy training with Adam; labels are 1 = digit, 0 = non-digit.
ClfTrainResult train_cnn(const std::vector<Eigen::VectorXd>& embeddings,
                         const std::vector<int>& labels,
                         const ClfTrainConfig& config = {},
                         const CnnConfig& arch = {});

struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::size_t total() const { return tp + fp + fn + tn; }
};

struct MetricsReport {
  double accuracy = 0.0;
  double f1 = 0.0;
  double auroc = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  ConfusionCounts confusion;
  // metric name -> (low, high) 95% bounds; filled by callers that bootstrap
  std::map<std::string, std::pair<double, double>> ci;
};

/// Threshold-0.5 confusion metrics plus rank-based AUROC (ties count 1/2).
/// Digit is the positive class. Throws SingleClassError on uniform labels.
MetricsReport evaluate(const std::vector<double>& scores,
                       const std::vector<int>& labels);

/// The scalar metric used by the bootstrap; throws SingleClassError when the
/// metric is undefined on the given labels.
double metric_value(const std::string& metric,
                    const std::vector<double>& scores,
                    const std::vector<int>& labels);

/// Percentile bootstrap interval; degenerate resamples are redrawn a bounded
/// number of times before giving up.
std::pair<double, double>
bootstrap_ci(const std::string& metric, const std::vector<double>& scores,
             const std::vector<int>& labels, std::size_t resamples = 1000,
             double level = 0.95, std::uint64_t seed = 1);

} // namespace eegflow::clf
