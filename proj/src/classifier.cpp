#include "eegflow/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eegflow/rng.hpp"

namespace eegflow::clf {

namespace {

std::size_t pooled_len(std::size_t n, std::size_t pool) {
  return n / pool; // inputs are powers of two at the configured sizes
}

} // namespace

CnnParams CnnParams::zeros(const CnnConfig& config) {
  CnnParams p;
  p.config = config;
  p.conv1_w = Eigen::MatrixXd::Zero(Eigen::Index(config.conv1_filters),
                                    Eigen::Index(config.kernel));
  p.conv1_b = Eigen::VectorXd::Zero(Eigen::Index(config.conv1_filters));
  p.conv2_w.assign(config.conv2_filters,
                   Eigen::MatrixXd::Zero(Eigen::Index(config.conv1_filters),
                                         Eigen::Index(config.kernel)));
  p.conv2_b = Eigen::VectorXd::Zero(Eigen::Index(config.conv2_filters));
  const std::size_t flat =
      pooled_len(pooled_len(config.input_dim, config.pool), config.pool) *
      config.conv2_filters;
  p.dense_w = Eigen::MatrixXd::Zero(2, Eigen::Index(flat));
  p.dense_b = Eigen::VectorXd::Zero(2);
  return p;
}

CnnParams CnnParams::init(std::uint64_t seed, const CnnConfig& config) {
  CnnParams p = zeros(config);
  Rng rng(Rng::mix(seed, 0x636e6e));
  auto fill = [&rng](auto& m, double fan_in) {
    const double bound = 1.0 / std::sqrt(fan_in);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        m(i, j) = rng.uniform(-bound, bound);
  };
  fill(p.conv1_w, double(config.kernel));
  for (auto& w : p.conv2_w)
    fill(w, double(config.kernel * config.conv1_filters));
  fill(p.dense_w, double(p.dense_w.cols()));
  return p;
}

std::size_t CnnParams::parameter_count() const {
  std::size_t count = std::size_t(conv1_w.size()) + std::size_t(conv1_b.size());
  for (const auto& w : conv2_w) count += std::size_t(w.size());
  count += std::size_t(conv2_b.size());
  count += std::size_t(dense_w.size()) + std::size_t(dense_b.size());
  return count;
}

bool CnnParams::all_finite() const {
  if (!conv1_w.allFinite() || !conv1_b.allFinite() || !conv2_b.allFinite() ||
      !dense_w.allFinite() || !dense_b.allFinite())
    return false;
  for (const auto& w : conv2_w)
    if (!w.allFinite()) return false;
  return true;
}

namespace {

// Same-padded 1D convolution: out(f, t) = b(f) + sum_c sum_k w(c, k) *
// in(c, t + k - kernel/2), zeros outside.
Eigen::MatrixXd conv1d_same(const Eigen::MatrixXd& in,
                            const std::vector<Eigen::MatrixXd>& weights,
                            const Eigen::VectorXd& bias, std::size_t kernel) {
  const auto filters = Eigen::Index(weights.size());
  const auto len = in.cols();
  const auto offset = Eigen::Index(kernel / 2);
  Eigen::MatrixXd out(filters, len);
  for (Eigen::Index f = 0; f < filters; ++f) {
    const auto& w = weights[std::size_t(f)];
    for (Eigen::Index t = 0; t < len; ++t) {
      double acc = bias(f);
      for (Eigen::Index k = 0; k < Eigen::Index(kernel); ++k) {
        const auto src = t + k - offset;
        if (src < 0 || src >= len) continue;
        for (Eigen::Index c = 0; c < in.rows(); ++c)
          acc += w(c, k) * in(c, src);
      }
      out(f, t) = acc;
    }
  }
  return out;
}

struct PoolResult {
  Eigen::MatrixXd values;
  Eigen::MatrixXi argmax; // source column per pooled cell (first max wins)
};

PoolResult maxpool(const Eigen::MatrixXd& in, std::size_t pool) {
  const auto out_len = Eigen::Index(pooled_len(std::size_t(in.cols()), pool));
  PoolResult r;
  r.values.resize(in.rows(), out_len);
  r.argmax.resize(in.rows(), out_len);
  for (Eigen::Index f = 0; f < in.rows(); ++f)
    for (Eigen::Index t = 0; t < out_len; ++t) {
      Eigen::Index best = t * Eigen::Index(pool);
      for (Eigen::Index k = 1; k < Eigen::Index(pool); ++k) {
        const auto idx = t * Eigen::Index(pool) + k;
        if (in(f, idx) > in(f, best)) best = idx;
      }
      r.values(f, t) = in(f, best);
      r.argmax(f, t) = int(best);
    }
  return r;
}

struct CnnCache {
  Eigen::MatrixXd a1;     // conv1 pre-activation
  Eigen::MatrixXd r1;     // relu(a1)
  PoolResult p1;
  Eigen::MatrixXd a2;     // conv2 pre-activation
  Eigen::MatrixXd r2;
  PoolResult p2;
  Eigen::VectorXd flat;
  Eigen::Vector2d logits;
  Eigen::Vector2d probs; // (non-digit, digit)
};

CnnCache forward_cached(const CnnParams& params, const Eigen::VectorXd& z) {
  const auto& cfg = params.config;
  if (std::size_t(z.size()) != cfg.input_dim)
    throw ShapeError("cnn_forward: embedding length mismatch");

  CnnCache c;
  Eigen::MatrixXd in(1, z.size());
  in.row(0) = z.transpose();
  std::vector<Eigen::MatrixXd> conv1_stack;
  conv1_stack.reserve(cfg.conv1_filters);
  for (Eigen::Index f = 0; f < Eigen::Index(cfg.conv1_filters); ++f)
    conv1_stack.push_back(params.conv1_w.row(f));
  c.a1 = conv1d_same(in, conv1_stack, params.conv1_b, cfg.kernel);
  c.r1 = c.a1.cwiseMax(0.0);
  c.p1 = maxpool(c.r1, cfg.pool);
  c.a2 = conv1d_same(c.p1.values, params.conv2_w, params.conv2_b, cfg.kernel);
  c.r2 = c.a2.cwiseMax(0.0);
  c.p2 = maxpool(c.r2, cfg.pool);

  c.flat.resize(c.p2.values.size());
  for (Eigen::Index f = 0; f < c.p2.values.rows(); ++f)
    for (Eigen::Index t = 0; t < c.p2.values.cols(); ++t)
      c.flat(f * c.p2.values.cols() + t) = c.p2.values(f, t);

  c.logits = params.dense_w * c.flat + params.dense_b;
  const double peak = c.logits.maxCoeff();
  const Eigen::Vector2d shifted = c.logits.array() - peak;
  const Eigen::Vector2d exps = shifted.array().exp();
  c.probs = exps / exps.sum();
  return c;
}

struct CnnGradients {
  Eigen::MatrixXd conv1_w;
  Eigen::VectorXd conv1_b;
  std::vector<Eigen::MatrixXd> conv2_w;
  Eigen::VectorXd conv2_b;
  Eigen::MatrixXd dense_w;
  Eigen::VectorXd dense_b;
};

CnnGradients zero_gradients(const CnnParams& params) {
  CnnGradients g;
  g.conv1_w = Eigen::MatrixXd::Zero(params.conv1_w.rows(),
                                    params.conv1_w.cols());
  g.conv1_b = Eigen::VectorXd::Zero(params.conv1_b.size());
  g.conv2_w.assign(params.conv2_w.size(),
                   Eigen::MatrixXd::Zero(params.conv2_w.front().rows(),
                                         params.conv2_w.front().cols()));
  g.conv2_b = Eigen::VectorXd::Zero(params.conv2_b.size());
  g.dense_w = Eigen::MatrixXd::Zero(params.dense_w.rows(),
                                    params.dense_w.cols());
  g.dense_b = Eigen::VectorXd::Zero(params.dense_b.size());
  return g;
}

// cross-entropy gradient for one sample accumulated into g; returns the loss
double backward_sample(const CnnParams& params, const Eigen::VectorXd& z,
                       int label, CnnGradients& g) {
  const auto& cfg = params.config;
  const CnnCache c = forward_cached(params, z);
  const double p_true = std::max(c.probs(label ? 1 : 0), 1e-300);
  const double loss = -std::log(p_true);

  Eigen::Vector2d dlogits = c.probs;
  dlogits(label ? 1 : 0) -= 1.0;

  g.dense_w.noalias() += dlogits * c.flat.transpose();
  g.dense_b += dlogits;
  const Eigen::VectorXd dflat = params.dense_w.transpose() * dlogits;

  // unflatten -> pool2 -> relu2 -> conv2
  Eigen::MatrixXd dr2 = Eigen::MatrixXd::Zero(c.r2.rows(), c.r2.cols());
  for (Eigen::Index f = 0; f < c.p2.values.rows(); ++f)
    for (Eigen::Index t = 0; t < c.p2.values.cols(); ++t)
      dr2(f, c.p2.argmax(f, t)) += dflat(f * c.p2.values.cols() + t);
  const Eigen::MatrixXd da2 =
      dr2.cwiseProduct((c.a2.array() > 0.0).cast<double>().matrix());

  const auto offset = Eigen::Index(cfg.kernel / 2);
  Eigen::MatrixXd dp1 = Eigen::MatrixXd::Zero(c.p1.values.rows(),
                                              c.p1.values.cols());
  for (Eigen::Index f = 0; f < da2.rows(); ++f) {
    auto& gw = g.conv2_w[std::size_t(f)];
    const auto& w = params.conv2_w[std::size_t(f)];
    for (Eigen::Index t = 0; t < da2.cols(); ++t) {
      const double d = da2(f, t);
      if (d == 0.0) continue;
      g.conv2_b(f) += d;
      for (Eigen::Index k = 0; k < Eigen::Index(cfg.kernel); ++k) {
        const auto src = t + k - offset;
        if (src < 0 || src >= c.p1.values.cols()) continue;
        for (Eigen::Index ch = 0; ch < c.p1.values.rows(); ++ch) {
          gw(ch, k) += d * c.p1.values(ch, src);
          dp1(ch, src) += d * w(ch, k);
        }
      }
    }
  }

  Eigen::MatrixXd dr1 = Eigen::MatrixXd::Zero(c.r1.rows(), c.r1.cols());
  for (Eigen::Index f = 0; f < c.p1.values.rows(); ++f)
    for (Eigen::Index t = 0; t < c.p1.values.cols(); ++t)
      dr1(f, c.p1.argmax(f, t)) += dp1(f, t);
  const Eigen::MatrixXd da1 =
      dr1.cwiseProduct((c.a1.array() > 0.0).cast<double>().matrix());

  for (Eigen::Index f = 0; f < da1.rows(); ++f)
    for (Eigen::Index t = 0; t < da1.cols(); ++t) {
      const double d = da1(f, t);
      if (d == 0.0) continue;
      g.conv1_b(f) += d;
      for (Eigen::Index k = 0; k < Eigen::Index(cfg.kernel); ++k) {
        const auto src = t + k - offset;
        if (src < 0 || src >= z.size()) continue;
        g.conv1_w(f, k) += d * z(src);
      }
    }
  return loss;
}

struct AdamBuf {
  Eigen::MatrixXd m, v;
};

void adam_step(Eigen::Ref<Eigen::MatrixXd> w, AdamBuf& buf,
               const Eigen::MatrixXd& grad, const ClfTrainConfig& cfg,
               std::size_t step) {
  buf.m = cfg.beta1 * buf.m + (1.0 - cfg.beta1) * grad;
  buf.v = cfg.beta2 * buf.v + (1.0 - cfg.beta2) * grad.cwiseAbs2();
  const double bc1 = 1.0 - std::pow(cfg.beta1, double(step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, double(step));
  w.array() -= cfg.learning_rate * (buf.m.array() / bc1) /
               ((buf.v.array() / bc2).sqrt() + cfg.adam_epsilon);
}

} // namespace

double cnn_forward(const CnnParams& params, const Eigen::VectorXd& z) {
  return forward_cached(params, z).probs(1);
}

ClfTrainResult train_cnn(const std::vector<Eigen::VectorXd>& embeddings,
                         const std::vector<int>& labels,
                         const ClfTrainConfig& config, const CnnConfig& arch) {
  if (embeddings.size() != labels.size() || embeddings.empty())
    throw ShapeError("train_cnn: embeddings/labels mismatch");
  const bool has_pos = std::count(labels.begin(), labels.end(), 1) > 0;
  const bool has_neg = std::count(labels.begin(), labels.end(), 0) > 0;
  if (!has_pos || !has_neg)
    throw SingleClassError("train_cnn: need both classes present");

  ClfTrainResult result;
  result.params = CnnParams::init(config.seed, arch);

  auto bufs_like = [](const Eigen::MatrixXd& m) {
    return AdamBuf{Eigen::MatrixXd::Zero(m.rows(), m.cols()),
                   Eigen::MatrixXd::Zero(m.rows(), m.cols())};
  };
  AdamBuf b_c1w = bufs_like(result.params.conv1_w);
  AdamBuf b_c1b = bufs_like(result.params.conv1_b);
  std::vector<AdamBuf> b_c2w;
  for (const auto& w : result.params.conv2_w) b_c2w.push_back(bufs_like(w));
  AdamBuf b_c2b = bufs_like(result.params.conv2_b);
  AdamBuf b_dw = bufs_like(result.params.dense_w);
  AdamBuf b_db = bufs_like(result.params.dense_b);

  Rng rng(Rng::mix(config.seed, 0x736866));
  std::vector<std::size_t> order(embeddings.size());
  std::iota(order.begin(), order.end(), 0);

  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size) {
      const std::size_t stop =
          std::min(order.size(), start + config.batch_size);
      CnnGradients g = zero_gradients(result.params);
      double batch_loss = 0.0;
      for (std::size_t idx = start; idx < stop; ++idx)
        batch_loss += backward_sample(result.params, embeddings[order[idx]],
                                      labels[order[idx]], g);
      const double inv = 1.0 / double(stop - start);
      batch_loss *= inv;
      epoch_loss += batch_loss * double(stop - start);

      ++step;
      adam_step(result.params.conv1_w, b_c1w, g.conv1_w * inv, config, step);
      adam_step(result.params.conv1_b, b_c1b, g.conv1_b * inv, config, step);
      for (std::size_t f = 0; f < result.params.conv2_w.size(); ++f)
        adam_step(result.params.conv2_w[f], b_c2w[f], g.conv2_w[f] * inv,
                  config, step);
      adam_step(result.params.conv2_b, b_c2b, g.conv2_b * inv, config, step);
      adam_step(result.params.dense_w, b_dw, g.dense_w * inv, config, step);
      adam_step(result.params.dense_b, b_db, g.dense_b * inv, config, step);
    }
    const double loss = epoch_loss / double(order.size());
    if (!std::isfinite(loss) || !result.params.all_finite())
      throw DivergenceError("train_cnn: loss diverged at epoch " +
                            std::to_string(epoch));
    result.loss_curve.push_back(loss);
  }
  return result;
}

namespace {

void check_eval_inputs(const std::vector<double>& scores,
                       const std::vector<int>& labels) {
  if (scores.size() != labels.size() || scores.empty())
    throw ShapeError("evaluate: scores/labels mismatch");
  for (double s : scores)
    if (!(s >= 0.0 && s <= 1.0))
      throw ShapeError("evaluate: scores must lie in [0, 1]");
  for (int l : labels)
    if (l != 0 && l != 1) throw ShapeError("evaluate: labels must be 0/1");
}

// Rank-based Mann-Whitney AUROC; ties share averaged ranks, which matches
// pairwise concordance counting with ties worth 1/2.
double auroc_ranks(const std::vector<double>& scores,
                   const std::vector<int>& labels) {
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  std::vector<double> rank(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double shared = (double(i) + double(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = shared;
    i = j + 1;
  }

  double pos_rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t k = 0; k < n; ++k)
    if (labels[k] == 1) {
      pos_rank_sum += rank[k];
      ++n_pos;
    }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) throw SingleClassError();
  const double u =
      pos_rank_sum - double(n_pos) * (double(n_pos) + 1.0) / 2.0;
  return u / (double(n_pos) * double(n_neg));
}

ConfusionCounts confusion_at_half(const std::vector<double>& scores,
                                  const std::vector<int>& labels) {
  ConfusionCounts c;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool pred = scores[i] >= 0.5;
    if (labels[i] == 1)
      pred ? ++c.tp : ++c.fn;
    else
      pred ? ++c.fp : ++c.tn;
  }
  return c;
}

} // namespace

MetricsReport evaluate(const std::vector<double>& scores,
                       const std::vector<int>& labels) {
  check_eval_inputs(scores, labels);
  MetricsReport r;
  r.auroc = auroc_ranks(scores, labels); // throws on single-class labels
  r.confusion = confusion_at_half(scores, labels);
  const auto& c = r.confusion;
  r.accuracy = double(c.tp + c.tn) / double(c.total());
  r.sensitivity = double(c.tp) / double(c.tp + c.fn);
  r.specificity = double(c.tn) / double(c.tn + c.fp);
  r.f1 = (2 * c.tp + c.fp + c.fn) == 0
             ? 0.0
             : 2.0 * double(c.tp) / double(2 * c.tp + c.fp + c.fn);
  return r;
}

double metric_value(const std::string& metric,
                    const std::vector<double>& scores,
                    const std::vector<int>& labels) {
  check_eval_inputs(scores, labels);
  if (metric == "auroc") return auroc_ranks(scores, labels);
  const ConfusionCounts c = confusion_at_half(scores, labels);
  if (metric == "accuracy") return double(c.tp + c.tn) / double(c.total());
  if (metric == "f1")
    return (2 * c.tp + c.fp + c.fn) == 0
               ? 0.0
               : 2.0 * double(c.tp) / double(2 * c.tp + c.fp + c.fn);
  if (metric == "sensitivity") {
    if (c.tp + c.fn == 0) throw SingleClassError("no positive labels");
    return double(c.tp) / double(c.tp + c.fn);
  }
  if (metric == "specificity") {
    if (c.tn + c.fp == 0) throw SingleClassError("no negative labels");
    return double(c.tn) / double(c.tn + c.fp);
  }
  throw ConfigError("unknown metric '" + metric + "'");
}

std::pair<double, double>
bootstrap_ci(const std::string& metric, const std::vector<double>& scores,
             const std::vector<int>& labels, std::size_t resamples,
             double level, std::uint64_t seed) {
  check_eval_inputs(scores, labels);
  if (resamples == 0 || level <= 0.0 || level >= 1.0)
    throw ConfigError("bootstrap_ci: invalid resamples/level");

  const std::size_t n = scores.size();
  Rng rng(Rng::mix(seed, 0x626f6f74));
  std::vector<double> values;
  values.reserve(resamples);
  std::vector<double> rs(n);
  std::vector<int> rl(n);

  constexpr std::size_t max_retries = 100;
  for (std::size_t r = 0; r < resamples; ++r) {
    bool ok = false;
    for (std::size_t attempt = 0; attempt < max_retries && !ok; ++attempt) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t pick = rng.index(n);
        rs[i] = scores[pick];
        rl[i] = labels[pick];
      }
      try {
        values.push_back(metric_value(metric, rs, rl));
        ok = true;
      } catch (const SingleClassError&) {
      }
    }
    if (!ok)
      throw SingleClassError(
          "bootstrap_ci: could not draw a two-class resample");
  }

  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double h = q * double(values.size() - 1);
    const auto lo = std::size_t(h);
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] + (h - double(lo)) * (values[lo + 1] - values[lo]);
  };
  const double tail = (1.0 - level) / 2.0;
  return {quantile(tail), quantile(1.0 - tail)};
}

} // namespace eegflow::clf
