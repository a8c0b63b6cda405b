#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eegflow/errors.hpp"

namespace eegflow::sig {

/// Open-set class label: one of the ten digits, or the rejected class.
struct Label {
  int code = -1; // -1 = non-digit, 0..9 = digit

  static Label digit(int d) { return Label{d}; }
  static Label non_digit() { return Label{-1}; }
  bool is_digit() const { return code >= 0; }
  bool operator==(const Label&) const = default;
};

/// One raw per-channel record as stored in the tab-separated dataset dump.
struct SignalRecord {
  std::int64_t record_id = 0;
  std::int64_t event_id = 0;
  std::string device;
  std::string channel;
  int label_code = -1;
  std::size_t sample_count = 0;
  std::vector<double> samples;

  bool operator==(const SignalRecord&) const = default;
};

/// Fixed-length multi-channel sample window. Channel order is the configured
/// order and is normative for everything downstream.
struct MultiChannelEpoch {
  std::int64_t event_id = 0;
  std::vector<std::string> channel_names;
  std::vector<std::vector<double>> channels; // aligned with channel_names
  Label label;
  double duration_s = 2.0;

  std::size_t n_samples() const {
    return channels.empty() ? 0 : channels.front().size();
  }
  const std::vector<double>& channel(const std::string& name) const;
};

/// SNR mixing request; lambda is filled in by mix_at_snr.
struct MixSpec {
  double snr_db = 0.0;
  std::uint64_t seed = 0;
  double lambda = 0.0;
};

inline constexpr double kSnrDbMin = -7.0;
inline constexpr double kSnrDbMax = 2.0;

struct ParsedRecord {
  SignalRecord record;
  bool sample_count_corrected = false; // size field disagreed with the data
};

/// Parse one tab-separated line: id, event, device, channel, code, size,
/// comma-separated samples. Whitespace around tokens is tolerated; fields
/// past the seventh are ignored. Throws FieldCountError / NumericParseError
/// carrying the line number.
ParsedRecord parse_record_line(const std::string& line,
                               std::size_t line_no = 0);

/// Inverse of parse_record_line for well-formed records.
std::string format_record_line(const SignalRecord& r);

struct AssembleOptions {
  std::vector<std::string> channels{"FP1", "FP2", "TP9", "TP10"};
  // Hardware label -> canonical channel name (e.g. AF7 -> FP1).
  std::vector<std::pair<std::string, std::string>> aliases;
};

struct AssembleStats {
  std::size_t epochs = 0;
  std::size_t dropped_missing_channel = 0;
  std::size_t dropped_invalid_label = 0;
  std::size_t duplicate_records = 0;
};

/// Group records by event, keep events with all configured channels, resample
/// each channel linearly to length n, map label code -1 -> non-digit.
/// Incomplete events are dropped and counted, never fatal.
std::vector<MultiChannelEpoch>
assemble_epochs(const std::vector<SignalRecord>& records, std::size_t n,
                const AssembleOptions& options = {},
                AssembleStats* stats = nullptr);

/// Linear interpolation of x onto n points with endpoints preserved.
std::vector<double> resample_linear(const std::vector<double>& x,
                                    std::size_t n);

enum class SynthClass { A, B };

struct SynthOptions {
  std::vector<std::string> channels{"FP1", "FP2", "TP9", "TP10"};
  double sample_rate_hz = 256.0;
  double freq_a_hz = 10.0;
  double freq_b_hz = 22.0;
  double noise_scale = 0.15; // 1/f amplitude scale relative to the tone
};

/// Deterministic two-class surrogate: a dominant oscillation (10 Hz for A,
/// 22 Hz for B at the nominal 256 Hz rate) plus 1/f background noise with
/// per-channel independent phase. Class A is labeled digit(0), class B
/// non-digit, which realizes the open-set binary task at desk scale.
MultiChannelEpoch synth_epoch(SynthClass cls, std::uint64_t seed,
                              std::size_t n = 512,
                              const SynthOptions& options = {});

double rms(const std::vector<double>& x);

struct Mixed {
  std::vector<double> mixed;
  double lambda = 0.0;
};

/// mixed = clean + lambda*noise with lambda chosen so that
/// 20*log10(RMS(clean)/RMS(lambda*noise)) = snr_db.
Mixed mix_at_snr(const std::vector<double>& clean,
                 const std::vector<double>& noise, double snr_db);

/// 20*log10(RMS(clean)/RMS(scaled_noise)).
double measure_snr(const std::vector<double>& clean,
                   const std::vector<double>& scaled_noise);

} // namespace eegflow::sig
