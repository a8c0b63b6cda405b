#include "eegflow/gcn.hpp"

#include <cmath>

#include "eegflow/rng.hpp"

namespace eegflow::gcn {

GcnParams GcnParams::zeros(Eigen::Index dim) {
  GcnParams p;
  p.w1 = Eigen::MatrixXd::Zero(dim, dim);
  p.w_skip1 = Eigen::MatrixXd::Zero(dim, dim);
  p.w2 = Eigen::MatrixXd::Zero(dim, dim);
  p.w_skip2 = Eigen::MatrixXd::Zero(dim, dim);
  return p;
}

GcnParams GcnParams::init(Eigen::Index dim, std::uint64_t seed) {
  GcnParams p = zeros(dim);
  const double bound = 1.0 / std::sqrt(double(dim));
  Rng rng(Rng::mix(seed, 0x6c6e));
  for (auto* m : {&p.w1, &p.w_skip1, &p.w2, &p.w_skip2})
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index j = 0; j < dim; ++j)
        (*m)(i, j) = rng.uniform(-bound, bound);
  return p;
}

bool GcnParams::all_finite() const {
  return w1.allFinite() && w_skip1.allFinite() && w2.allFinite() &&
         w_skip2.allFinite();
}

namespace {

void check_shapes(const GcnParams& params, const Eigen::MatrixXd& a,
                  const Eigen::MatrixXd& x) {
  const auto d = params.dim();
  if (params.w1.cols() != d || params.w_skip1.rows() != d ||
      params.w_skip1.cols() != d || params.w2.rows() != d ||
      params.w2.cols() != d || params.w_skip2.rows() != d ||
      params.w_skip2.cols() != d)
    throw ShapeError("gcn: parameter matrices must be square and equal size");
  if (a.rows() != a.cols()) throw ShapeError("gcn: adjacency must be square");
  if (x.rows() != a.rows() || x.cols() != d)
    throw ShapeError("gcn: feature matrix shape mismatch");
}

Eigen::MatrixXd relu(const Eigen::MatrixXd& m) {
  return m.cwiseMax(0.0);
}

// forward pass keeping everything the backward pass needs
struct ForwardCache {
  Eigen::MatrixXd ax, m1, h1, ah1, m2, h2;
  Eigen::VectorXd z;
};

ForwardCache forward_cached(const GcnParams& params, const Eigen::MatrixXd& a,
                            const Eigen::MatrixXd& x) {
  ForwardCache c;
  c.ax.noalias() = a * x;
  c.m1.noalias() = c.ax * params.w1;
  c.h1 = relu(c.m1);
  c.h1.noalias() += x * params.w_skip1;
  c.ah1.noalias() = a * c.h1;
  c.m2.noalias() = c.ah1 * params.w2;
  c.h2 = relu(c.m2);
  c.h2.noalias() += c.h1 * params.w_skip2;
  c.z = c.h2.colwise().mean();
  return c;
}

} // namespace

GcnForward gcn_forward(const GcnParams& params, const Eigen::MatrixXd& a,
                       const Eigen::MatrixXd& x) {
  check_shapes(params, a, x);
  auto c = forward_cached(params, a, x);
  return {std::move(c.h1), std::move(c.h2), std::move(c.z)};
}

Eigen::VectorXd embed(const GcnParams& params, const Eigen::MatrixXd& a,
                      const Eigen::MatrixXd& x) {
  check_shapes(params, a, x);
  return forward_cached(params, a, x).z;
}

namespace {

PairList all_pairs(std::size_t n) {
  PairList pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  return pairs;
}

} // namespace

double distance_loss(const std::vector<Eigen::VectorXd>& embeddings,
                     const Eigen::MatrixXd& target, const PairList& pairs) {
  if (target.rows() != target.cols() ||
      std::size_t(target.rows()) != embeddings.size())
    throw ShapeError("distance_loss: target must be square over the batch");
  const PairList& use = pairs.empty() ? all_pairs(embeddings.size()) : pairs;
  if (use.empty()) return 0.0;

  double acc = 0.0;
  for (const auto& [i, j] : use) {
    const double dist = (embeddings[i] - embeddings[j]).norm();
    const double e = dist - target(Eigen::Index(i), Eigen::Index(j));
    acc += e * e;
  }
  return acc / double(use.size());
}

GcnGradients gcn_gradient(const GcnParams& params,
                          const std::vector<Eigen::MatrixXd>& batch,
                          const Eigen::MatrixXd& a,
                          const Eigen::MatrixXd& target,
                          const PairList& pairs) {
  if (batch.size() < 2)
    throw ShapeError("gcn_gradient: batch must have at least 2 samples");
  if (target.rows() != target.cols() ||
      std::size_t(target.rows()) != batch.size())
    throw ShapeError("gcn_gradient: target must be square over the batch");

  const PairList& use = pairs.empty() ? all_pairs(batch.size()) : pairs;
  const auto d = params.dim();
  const std::size_t n = batch.size();

  std::vector<ForwardCache> caches;
  caches.reserve(n);
  for (const auto& x : batch) {
    check_shapes(params, a, x);
    caches.push_back(forward_cached(params, a, x));
  }

  // accumulate dL/dz per sample across pairs
  std::vector<Eigen::VectorXd> gz(n, Eigen::VectorXd::Zero(d));
  const double inv_pairs = use.empty() ? 0.0 : 1.0 / double(use.size());
  for (const auto& [i, j] : use) {
    const Eigen::VectorXd diff = caches[i].z - caches[j].z;
    const double dist = diff.norm();
    if (dist < 1e-12) continue; // subgradient 0 at coincident embeddings
    const double e = dist - target(Eigen::Index(i), Eigen::Index(j));
    const Eigen::VectorXd g = (2.0 * e * inv_pairs / dist) * diff;
    gz[i] += g;
    gz[j] -= g;
  }

  GcnGradients grads{Eigen::MatrixXd::Zero(d, d), Eigen::MatrixXd::Zero(d, d),
                     Eigen::MatrixXd::Zero(d, d), Eigen::MatrixXd::Zero(d, d)};
  const Eigen::MatrixXd at = a.transpose();
  for (std::size_t s = 0; s < n; ++s) {
    if (gz[s].isZero(0.0)) continue;
    const auto& c = caches[s];
    const double rows = double(c.h2.rows());
    // z = mean of H2 rows
    const Eigen::MatrixXd dh2 =
        Eigen::VectorXd::Constant(c.h2.rows(), 1.0 / rows) * gz[s].transpose();
    const Eigen::MatrixXd dm2 =
        dh2.cwiseProduct((c.m2.array() > 0.0).cast<double>().matrix());
    grads.w2.noalias() += c.ah1.transpose() * dm2;
    grads.w_skip2.noalias() += c.h1.transpose() * dh2;
    Eigen::MatrixXd dh1 = at * dm2 * params.w2.transpose();
    dh1.noalias() += dh2 * params.w_skip2.transpose();
    const Eigen::MatrixXd dm1 =
        dh1.cwiseProduct((c.m1.array() > 0.0).cast<double>().matrix());
    grads.w1.noalias() += c.ax.transpose() * dm1;
    grads.w_skip1.noalias() += batch[s].transpose() * dh1;
  }
  return grads;
}

Eigen::MatrixXd pairwise_frobenius(const std::vector<Eigen::MatrixXd>& x) {
  const auto n = Eigen::Index(x.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dist = (x[std::size_t(i)] - x[std::size_t(j)]).norm();
      d(i, j) = dist;
      d(j, i) = dist;
    }
  return d;
}

namespace {

struct AdamState {
  Eigen::MatrixXd m, v;
  explicit AdamState(Eigen::Index d)
      : m(Eigen::MatrixXd::Zero(d, d)), v(Eigen::MatrixXd::Zero(d, d)) {}
};

void adam_update(Eigen::MatrixXd& w, AdamState& state,
                 const Eigen::MatrixXd& grad, const GcnTrainConfig& cfg,
                 std::size_t step) {
  state.m = cfg.beta1 * state.m + (1.0 - cfg.beta1) * grad;
  state.v = cfg.beta2 * state.v + (1.0 - cfg.beta2) * grad.cwiseAbs2();
  const double bc1 = 1.0 - std::pow(cfg.beta1, double(step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, double(step));
  w.array() -= cfg.learning_rate * (state.m.array() / bc1) /
               ((state.v.array() / bc2).sqrt() + cfg.adam_epsilon);
}

} // namespace

GcnTrainResult train_gcn(const std::vector<Eigen::MatrixXd>& features,
                         const Eigen::MatrixXd& a,
                         const GcnTrainConfig& config) {
  if (features.empty()) throw ShapeError("train_gcn: empty dataset");
  if (config.epochs < 1 || config.learning_rate < 0.0)
    throw ShapeError("train_gcn: invalid config");

  const auto d = features.front().cols();
  const std::size_t n = features.size();

  GcnTrainResult result;
  result.target = pairwise_frobenius(features);
  if (n > 1) {
    const double mean =
        result.target.sum() / double(n * (n - 1)); // off-diagonal mean
    if (mean > 0.0) result.target /= mean;
  }

  result.params = GcnParams::init(d, config.seed);
  AdamState s1(d), s_skip1(d), s2(d), s_skip2(d);
  Rng rng(Rng::mix(config.seed, 0x70616972));
  std::size_t step = 0;

  const std::size_t batch_pairs = std::max<std::size_t>(1, config.batch_pairs);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    std::size_t drawn = 0;
    while (drawn < config.pair_sample_count) {
      const std::size_t want =
          std::min(batch_pairs, config.pair_sample_count - drawn);
      drawn += want;

      // map the drawn global pairs onto a dedup'd batch
      std::vector<std::size_t> batch_of(n, SIZE_MAX);
      std::vector<Eigen::MatrixXd> batch;
      PairList pairs;
      auto intern = [&](std::size_t sample) {
        if (batch_of[sample] == SIZE_MAX) {
          batch_of[sample] = batch.size();
          batch.push_back(features[sample]);
        }
        return batch_of[sample];
      };
      std::vector<std::pair<std::size_t, std::size_t>> global_pairs;
      for (std::size_t p = 0; p < want; ++p) {
        const std::size_t i = rng.index(n);
        std::size_t j = n > 1 ? rng.index(n - 1) : 0;
        if (j >= i) ++j;
        global_pairs.emplace_back(i, j);
        pairs.emplace_back(intern(i), intern(j));
      }
      Eigen::MatrixXd target(Eigen::Index(batch.size()),
                             Eigen::Index(batch.size()));
      target.setZero();
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto [gi, gj] = global_pairs[p];
        const auto [bi, bj] = pairs[p];
        target(Eigen::Index(bi), Eigen::Index(bj)) =
            result.target(Eigen::Index(gi), Eigen::Index(gj));
        target(Eigen::Index(bj), Eigen::Index(bi)) =
            result.target(Eigen::Index(gi), Eigen::Index(gj));
      }

      if (batch.size() < 2) continue;
      const auto grads =
          gcn_gradient(result.params, batch, a, target, pairs);
      ++step;
      adam_update(result.params.w1, s1, grads.w1, config, step);
      adam_update(result.params.w_skip1, s_skip1, grads.w_skip1, config, step);
      adam_update(result.params.w2, s2, grads.w2, config, step);
      adam_update(result.params.w_skip2, s_skip2, grads.w_skip2, config, step);

      std::vector<Eigen::VectorXd> zs;
      zs.reserve(batch.size());
      for (const auto& x : batch) zs.push_back(embed(result.params, a, x));
      epoch_loss += distance_loss(zs, target, pairs);
      ++batches;
    }
    const double loss = batches ? epoch_loss / double(batches) : 0.0;
    if (!std::isfinite(loss) || !result.params.all_finite())
      throw DivergenceError("train_gcn: loss diverged at epoch " +
                            std::to_string(epoch));
    result.loss_curve.push_back(loss);
  }
  return result;
}

} // namespace eegflow::gcn
