#include "eegflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eegflow/rng.hpp"

namespace eegflow::spectral {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (!is_power_of_two(n))
    throw ShapeError("fft_radix2: size must be a power of two");
  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang =
        (inverse ? 2.0 : -2.0) * std::numbers::pi / double(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const auto u = a[i + j];
        const auto v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse)
    for (auto& x : a) x /= double(n);
}

PowerSpectrum one_sided_power_spectrum(const std::vector<double>& x,
                                       double sample_rate_hz) {
  const std::size_t n = x.size();
  if (n < 2 || n % 2 != 0) throw OddLengthError(n);

  PowerSpectrum out;
  out.bin_hz = sample_rate_hz / double(n);
  out.bins.resize(n / 2);

  if (is_power_of_two(n)) {
    std::vector<std::complex<double>> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = x[i];
    fft_radix2(a, false);
    for (std::size_t k = 0; k < n / 2; ++k) out.bins[k] = std::norm(a[k]);
  } else {
    // direct evaluation; non-power-of-two windows only occur at desk scale
    for (std::size_t k = 0; k < n / 2; ++k) {
      std::complex<double> acc(0.0, 0.0);
      const double w = -2.0 * std::numbers::pi * double(k) / double(n);
      for (std::size_t t = 0; t < n; ++t)
        acc += x[t] * std::complex<double>(std::cos(w * double(t)),
                                           std::sin(w * double(t)));
      out.bins[k] = std::norm(acc);
    }
  }
  return out;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw ShapeError("pearson: inputs must have equal length >= 2");
  const std::size_t n = a.size();
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= double(n);
  mb /= double(n);
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (saa == 0.0 || sbb == 0.0) throw ZeroVarianceError();
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

Eigen::MatrixXd graph_laplacian(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols())
    throw ShapeError("graph_laplacian: matrix must be square");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw AsymmetryError("graph_laplacian: weight matrix is not symmetric");
  if (a.diagonal().cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw AsymmetryError("graph_laplacian: diagonal must be zero");

  Eigen::MatrixXd l = -a;
  l.diagonal() = a.rowwise().sum();
  return l;
}

namespace {

void canonical_sign(Eigen::Ref<Eigen::VectorXd> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-11) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

// Lanczos with full reorthogonalization. Extends a single Krylov basis in
// checkpointed chunks and stops once the k lowest Ritz pairs have small
// residuals; at m == n the factorization is exact, so termination does not
// depend on spectral gaps. Breakdowns (invariant subspace found, e.g. for
// eigenvalues with multiplicity) restart with a fresh seeded direction.
struct LanczosResult {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  std::size_t iterations = 0;
};

LanczosResult lanczos_smallest(const Eigen::MatrixXd& l, std::size_t k,
                               const EigsOptions& options) {
  const std::size_t n = std::size_t(l.rows());
  const double bound = std::max(l.cwiseAbs().rowwise().sum().maxCoeff(), 1.0);
  const double resid_tol = options.tolerance * bound;
  const double breakdown_tol = 1e-13 * bound;

  Rng rng(Rng::mix(options.seed, n));
  auto random_unit = [&](Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.gaussian();
  };

  Eigen::MatrixXd basis(n, n);
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(n);

  Eigen::VectorXd v(n);
  random_unit(v);
  v.normalize();
  basis.col(0) = v;

  std::size_t m = 0;
  Eigen::VectorXd w(n);
  auto reorthogonalize = [&](Eigen::VectorXd& x, std::size_t cols) {
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd coefs =
          basis.leftCols(Eigen::Index(cols)).transpose() * x;
      x.noalias() -= basis.leftCols(Eigen::Index(cols)) * coefs;
    }
  };

  std::size_t checkpoint = std::min(n, std::max<std::size_t>(2 * k + 32, 64));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small_solver;

  while (true) {
    // extend the factorization up to `checkpoint` columns
    while (m < checkpoint) {
      w.noalias() = l * basis.col(Eigen::Index(m));
      alpha[Eigen::Index(m)] = basis.col(Eigen::Index(m)).dot(w);
      reorthogonalize(w, m + 1);
      const double norm = w.norm();
      if (m + 1 == n) {
        beta[Eigen::Index(m)] = 0.0;
        ++m;
        break;
      }
      if (norm < breakdown_tol) {
        // invariant subspace exhausted: continue in a fresh direction
        random_unit(w);
        reorthogonalize(w, m + 1);
        w.normalize();
        beta[Eigen::Index(m)] = 0.0;
      } else {
        beta[Eigen::Index(m)] = norm;
        w /= norm;
      }
      basis.col(Eigen::Index(m + 1)) = w;
      ++m;
    }

    small_solver.computeFromTridiagonal(
        alpha.head(Eigen::Index(m)), beta.head(Eigen::Index(m) - 1),
        Eigen::ComputeEigenvectors);
    if (small_solver.info() != Eigen::Success)
      throw ConvergenceError("spectral_eigenbasis: tridiagonal solve failed",
                             m, std::numeric_limits<double>::quiet_NaN());

    const double tail = m < n ? beta[Eigen::Index(m - 1)] : 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      worst = std::max(
          worst, std::abs(tail * small_solver.eigenvectors()(
                                     Eigen::Index(m - 1), Eigen::Index(i))));
    if (worst <= resid_tol || m >= n) {
      if (worst > resid_tol)
        throw ConvergenceError("spectral_eigenbasis: iteration stalled", m,
                               worst);
      LanczosResult out;
      out.iterations = m;
      out.values = small_solver.eigenvalues().head(Eigen::Index(k));
      out.vectors.noalias() =
          basis.leftCols(Eigen::Index(m)) *
          small_solver.eigenvectors().leftCols(Eigen::Index(k));
      return out;
    }
    checkpoint = std::min(n, checkpoint * 2);
  }
}

} // namespace

LaplacianEigenbasis spectral_eigenbasis(const Eigen::MatrixXd& laplacian,
                                        std::size_t k,
                                        const EigsOptions& options) {
  const std::size_t n = std::size_t(laplacian.rows());
  if (laplacian.rows() != laplacian.cols())
    throw ShapeError("spectral_eigenbasis: matrix must be square");
  if (k < 1 || k > n)
    throw ShapeError("spectral_eigenbasis: k out of range");
  const double scale = std::max(1.0, laplacian.cwiseAbs().maxCoeff());
  if ((laplacian - laplacian.transpose()).cwiseAbs().maxCoeff() >
      1e-10 * scale)
    throw AsymmetryError("spectral_eigenbasis: matrix is not symmetric");

  LaplacianEigenbasis out;
  if (!options.force_iterative && n < options.dense_cutoff) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
    if (solver.info() != Eigen::Success)
      throw ConvergenceError("spectral_eigenbasis: dense solve failed", 0,
                             std::numeric_limits<double>::quiet_NaN());
    out.eigenvalues = solver.eigenvalues().head(Eigen::Index(k));
    out.eigenvectors = solver.eigenvectors().leftCols(Eigen::Index(k));
  } else {
    auto result = lanczos_smallest(laplacian, k, options);
    out.eigenvalues = std::move(result.values);
    out.eigenvectors = std::move(result.vectors);
  }
  for (Eigen::Index j = 0; j < out.eigenvectors.cols(); ++j)
    canonical_sign(out.eigenvectors.col(j));
  return out;
}

JointEigenmap::JointEigenmap(
    std::vector<std::string> channel_names,
    std::vector<std::pair<std::string, std::string>> pairs, std::size_t n,
    std::size_t d_out, const EigsOptions& options)
    : channel_names_(std::move(channel_names)), n_(n), d_out_(d_out) {
  const std::size_t c = channel_names_.size();
  if (c == 0 || n_ == 0) throw ShapeError("JointEigenmap: empty layout");
  if (d_out_ > c * n_)
    throw ShapeError("JointEigenmap: d_out exceeds joint graph size");

  auto channel_index = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < c; ++i)
      if (channel_names_[i] == name) return i;
    throw ConfigError("JointEigenmap: pair references unknown channel '" +
                      name + "'");
  };

  const std::size_t nodes = c * n_;
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(Eigen::Index(nodes),
                                              Eigen::Index(nodes));
  auto node = [&](std::size_t ch, std::size_t t) {
    return Eigen::Index(ch * n_ + t);
  };
  for (std::size_t ch = 0; ch < c; ++ch)
    for (std::size_t t = 0; t + 1 < n_; ++t) {
      adj(node(ch, t), node(ch, t + 1)) = 1.0;
      adj(node(ch, t + 1), node(ch, t)) = 1.0;
    }
  for (const auto& [a, b] : pairs) {
    const auto ca = channel_index(a);
    const auto cb = channel_index(b);
    if (ca == cb) throw ConfigError("JointEigenmap: self-pairing");
    for (std::size_t t = 0; t < n_; ++t) {
      adj(node(ca, t), node(cb, t)) = 1.0;
      adj(node(cb, t), node(ca, t)) = 1.0;
    }
  }

  basis_ = spectral_eigenbasis(graph_laplacian(adj), d_out_, options);
  basis_.node_index.reserve(nodes);
  for (std::size_t ch = 0; ch < c; ++ch)
    for (std::size_t t = 0; t < n_; ++t)
      basis_.node_index.emplace_back(int(ch), int(t));

  projections_.reserve(c);
  for (std::size_t ch = 0; ch < c; ++ch) {
    Eigen::MatrixXd p;
    p.resize(Eigen::Index(d_out_), Eigen::Index(n_));
    for (std::size_t j = 0; j < d_out_; ++j) {
      Eigen::VectorXd block = basis_.eigenvectors.col(Eigen::Index(j))
                                  .segment(node(ch, 0), Eigen::Index(n_));
      const double norm = block.norm();
      if (norm <= 1e-12) {
        block.setZero();
      } else {
        block /= norm;
        canonical_sign(block);
      }
      p.row(Eigen::Index(j)) = block.transpose();
    }
    projections_.push_back(std::move(p));
  }
}

std::vector<std::vector<double>>
JointEigenmap::reduce(const sig::MultiChannelEpoch& epoch) const {
  if (epoch.channel_names != channel_names_)
    throw OrderMismatchError("JointEigenmap: epoch channel order differs");
  std::vector<std::vector<double>> out;
  out.reserve(channel_names_.size());
  for (std::size_t ch = 0; ch < channel_names_.size(); ++ch) {
    const auto& x = epoch.channels[ch];
    if (x.size() != n_)
      throw ShapeError("JointEigenmap: channel length mismatch");
    const Eigen::Map<const Eigen::VectorXd> xv(x.data(), Eigen::Index(n_));
    const Eigen::VectorXd coords = projections_[ch] * xv;
    out.emplace_back(coords.data(), coords.data() + coords.size());
  }
  return out;
}

std::vector<std::vector<double>>
eigenmap_reduce(const sig::MultiChannelEpoch& epoch,
                const std::vector<std::pair<std::string, std::string>>& pairs,
                std::size_t d_out, const EigsOptions& options) {
  const JointEigenmap map(epoch.channel_names, pairs, epoch.n_samples(), d_out,
                          options);
  return map.reduce(epoch);
}

Eigen::MatrixXd ReducedSample::matrix() const {
  const std::size_t c = channel_names.size();
  const std::size_t d = time_vecs.empty() ? 0 : time_vecs.front().size();
  Eigen::MatrixXd m(Eigen::Index(2 * c), Eigen::Index(d));
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      m(Eigen::Index(i), Eigen::Index(j)) = time_vecs[i][j];
      m(Eigen::Index(c + i), Eigen::Index(j)) = freq_vecs[i][j];
    }
  return m;
}

std::vector<std::string> ReducedSample::row_names() const {
  std::vector<std::string> names;
  names.reserve(2 * channel_names.size());
  for (const auto& c : channel_names) names.push_back(c + "_t");
  for (const auto& c : channel_names) names.push_back(c + "_f");
  return names;
}

ReducedSample reduce_epoch(const sig::MultiChannelEpoch& epoch,
                           const JointEigenmap& eigenmap,
                           double sample_rate_hz) {
  if (epoch.n_samples() / 2 != eigenmap.d_out())
    throw ShapeError("reduce_epoch: d_out must equal N/2 so time and freq "
                     "vectors align");
  ReducedSample out;
  out.event_id = epoch.event_id;
  out.channel_names = epoch.channel_names;
  out.label = epoch.label;
  out.time_vecs = eigenmap.reduce(epoch);
  out.freq_vecs.reserve(epoch.channels.size());
  for (const auto& x : epoch.channels)
    out.freq_vecs.push_back(one_sided_power_spectrum(x, sample_rate_hz).bins);
  return out;
}

DenoiseScore denoise_metrics(const std::vector<double>& estimate,
                             const std::vector<double>& truth) {
  if (estimate.size() != truth.size())
    throw ShapeError("denoise_metrics: length mismatch");
  const double rt = sig::rms(truth);
  if (rt == 0.0) throw ZeroSignalError("denoise_metrics: zero-RMS truth");

  DenoiseScore score;
  score.cc = pearson(estimate, truth);

  std::vector<double> diff(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i)
    diff[i] = estimate[i] - truth[i];
  score.t_rrmse = sig::rms(diff) / rt;

  const auto pe = one_sided_power_spectrum(estimate).bins;
  const auto pt = one_sided_power_spectrum(truth).bins;
  std::vector<double> sdiff(pt.size());
  for (std::size_t i = 0; i < pt.size(); ++i) sdiff[i] = pe[i] - pt[i];
  const double rpt = sig::rms(pt);
  if (rpt == 0.0) throw ZeroSignalError("denoise_metrics: zero truth spectrum");
  score.s_rrmse = sig::rms(sdiff) / rpt;
  return score;
}

std::vector<bool> mask_low_correlation_segments(
    const std::vector<double>& raw, const std::vector<double>& denoised,
    std::size_t window, double threshold) {
  if (raw.size() != denoised.size())
    throw ShapeError("mask_low_correlation_segments: length mismatch");
  if (window == 0 || raw.size() % window != 0)
    throw ShapeError("mask_low_correlation_segments: window must divide the "
                     "signal length");

  const std::size_t count = raw.size() / window;
  std::vector<bool> mask(count, false);
  for (std::size_t w = 0; w < count; ++w) {
    const std::vector<double> a(raw.begin() + std::ptrdiff_t(w * window),
                                raw.begin() + std::ptrdiff_t((w + 1) * window));
    const std::vector<double> b(
        denoised.begin() + std::ptrdiff_t(w * window),
        denoised.begin() + std::ptrdiff_t((w + 1) * window));
    try {
      mask[w] = pearson(a, b) < threshold;
    } catch (const ZeroVarianceError&) {
      mask[w] = true; // flat segments carry no reconstruction evidence
    }
  }
  return mask;
}

} // namespace eegflow::spectral
