#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "eegflow/errors.hpp"
#include "eegflow/signal.hpp"

namespace eegflow::spectral {

/// In-place radix-2 FFT; size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a, bool inverse);

bool is_power_of_two(std::size_t n);

/// One-sided power spectrum: bins[k] = |sum_n x_n e^{-i 2 pi k n / N}|^2 for
/// k = 0..N/2-1 (no window, no normalization).
struct PowerSpectrum {
  std::vector<double> bins;
  double bin_hz = 0.0;
};

PowerSpectrum one_sided_power_spectrum(const std::vector<double>& x,
                                       double sample_rate_hz = 256.0);

/// Product-moment correlation. Throws ZeroVarianceError on constant input.
double pearson(const std::vector<double>& a, const std::vector<double>& b);

/// L = D - A for a symmetric zero-diagonal weight matrix.
Eigen::MatrixXd graph_laplacian(const Eigen::MatrixXd& a);

struct EigsOptions {
  std::uint64_t seed = 0x5eedbeef;
  double tolerance = 1e-10;       // residual, relative to the spectral bound
  bool force_iterative = false;   // test hook; default picks by size
  std::size_t dense_cutoff = 512; // below this a dense solve is used
};

/// k smallest eigenpairs, ascending, orthonormal, with the canonical sign
/// (first nonvanishing component positive).
struct LaplacianEigenbasis {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors; // columns aligned with eigenvalues
  // Row -> (channel index, time index) when the basis came from a joint
  // channel-time graph; empty for plain graphs.
  std::vector<std::pair<int, int>> node_index;
};

LaplacianEigenbasis spectral_eigenbasis(const Eigen::MatrixXd& laplacian,
                                        std::size_t k,
                                        const EigsOptions& options = {});

/// Joint (channel x time) graph reduction: unit-weight path edges along time
/// within each channel plus unit-weight coupling edges between paired
/// channels at equal time index. Channel c's coordinate j is the inner
/// product of its signal with eigenvector j restricted to c's node block,
/// with the block renormalized to unit norm and canonical sign (zero blocks
/// give coordinate 0). The basis depends only on the layout, so construct
/// once and reduce many epochs.
class JointEigenmap {
public:
  JointEigenmap(std::vector<std::string> channel_names,
                std::vector<std::pair<std::string, std::string>> pairs,
                std::size_t n, std::size_t d_out,
                const EigsOptions& options = {});

  std::vector<std::vector<double>> reduce(const sig::MultiChannelEpoch& epoch) const;

  const LaplacianEigenbasis& basis() const { return basis_; }
  std::size_t d_out() const { return d_out_; }
  std::size_t n() const { return n_; }

private:
  std::vector<std::string> channel_names_;
  std::size_t n_;
  std::size_t d_out_;
  LaplacianEigenbasis basis_;
  // One d_out x n projection matrix per channel (renormalized blocks).
  std::vector<Eigen::MatrixXd> projections_;
};

/// Convenience wrapper over a freshly built JointEigenmap.
std::vector<std::vector<double>>
eigenmap_reduce(const sig::MultiChannelEpoch& epoch,
                const std::vector<std::pair<std::string, std::string>>& pairs,
                std::size_t d_out = 256, const EigsOptions& options = {});

/// One sample after stage 2: per channel a reduced time vector and the
/// one-sided power spectrum, both of length N/2.
struct ReducedSample {
  std::int64_t event_id = 0;
  std::vector<std::string> channel_names;
  std::vector<std::vector<double>> time_vecs;
  std::vector<std::vector<double>> freq_vecs;
  sig::Label label;

  /// Normative feature matrix: time rows in channel order, then freq rows.
  Eigen::MatrixXd matrix() const;
  /// Row names in the same order ("FP1_t", ..., "FP1_f", ...).
  std::vector<std::string> row_names() const;
};

ReducedSample reduce_epoch(const sig::MultiChannelEpoch& epoch,
                           const JointEigenmap& eigenmap,
                           double sample_rate_hz = 256.0);

struct DenoiseScore {
  double cc = 0.0;
  double t_rrmse = 0.0;
  double s_rrmse = 0.0;
};

/// CC plus temporal and spectral relative RMS errors against ground truth.
DenoiseScore denoise_metrics(const std::vector<double>& estimate,
                             const std::vector<double>& truth);

/// Per-window flag: true where the raw/denoised correlation falls below the
/// threshold (strictly) or the window has no variance.
std::vector<bool> mask_low_correlation_segments(
    const std::vector<double>& raw, const std::vector<double>& denoised,
    std::size_t window, double threshold = 0.8);

} // namespace eegflow::spectral
