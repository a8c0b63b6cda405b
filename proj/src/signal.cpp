#include "eegflow/signal.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "eegflow/rng.hpp"

namespace eegflow::sig {

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::int64_t parse_int(std::string_view tok, std::size_t line_no) {
  tok = trim(tok);
  std::int64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw NumericParseError(line_no, std::string(tok));
  return value;
}

double parse_real(std::string_view tok, std::size_t line_no) {
  tok = trim(tok);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw NumericParseError(line_no, std::string(tok));
  return value;
}

} // namespace

const std::vector<double>&
MultiChannelEpoch::channel(const std::string& name) const {
  for (std::size_t i = 0; i < channel_names.size(); ++i)
    if (channel_names[i] == name) return channels[i];
  throw ConfigError("epoch has no channel '" + name + "'");
}

ParsedRecord parse_record_line(const std::string& line, std::size_t line_no) {
  const auto fields = split(line, '\t');
  if (fields.size() < 7) throw FieldCountError(line_no, fields.size(), 7);

  ParsedRecord out;
  auto& r = out.record;
  r.record_id = parse_int(fields[0], line_no);
  r.event_id = parse_int(fields[1], line_no);
  r.device = std::string(trim(fields[2]));
  r.channel = std::string(trim(fields[3]));
  r.label_code = int(parse_int(fields[4], line_no));
  const auto declared = parse_int(fields[5], line_no);

  const auto sample_field = trim(fields[6]);
  if (!sample_field.empty()) {
    for (auto tok : split(sample_field, ','))
      r.samples.push_back(parse_real(tok, line_no));
  }
  r.sample_count = r.samples.size();
  out.sample_count_corrected =
      declared < 0 || std::size_t(declared) != r.samples.size();
  return out;
}

std::string format_record_line(const SignalRecord& r) {
  std::ostringstream os;
  os.precision(17);
  os << r.record_id << '\t' << r.event_id << '\t' << r.device << '\t'
     << r.channel << '\t' << r.label_code << '\t' << r.sample_count << '\t';
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    if (i) os << ',';
    os << r.samples[i];
  }
  return os.str();
}

std::vector<double> resample_linear(const std::vector<double>& x,
                                    std::size_t n) {
  if (x.empty()) throw ZeroSignalError("cannot resample an empty signal");
  std::vector<double> out(n);
  if (x.size() == 1 || n == 1) {
    std::fill(out.begin(), out.end(), x.front());
    return out;
  }
  const double step = double(x.size() - 1) / double(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = double(i) * step;
    auto lo = std::size_t(p);
    if (lo >= x.size() - 1) lo = x.size() - 2;
    const double frac = p - double(lo);
    out[i] = x[lo] + frac * (x[lo + 1] - x[lo]);
  }
  return out;
}

std::vector<MultiChannelEpoch>
assemble_epochs(const std::vector<SignalRecord>& records, std::size_t n,
                const AssembleOptions& options, AssembleStats* stats) {
  AssembleStats local;
  AssembleStats& st = stats ? *stats : local;
  st = {};

  auto canonical = [&](const std::string& name) -> std::string {
    for (const auto& [alias, target] : options.aliases)
      if (alias == name) return target;
    return name;
  };

  // event -> channel index -> best record (smallest record_id wins so the
  // result is independent of input order).
  std::map<std::int64_t, std::vector<const SignalRecord*>> events;
  for (const auto& r : records) {
    const auto name = canonical(r.channel);
    const auto it =
        std::find(options.channels.begin(), options.channels.end(), name);
    if (it == options.channels.end()) continue;
    const auto ci = std::size_t(it - options.channels.begin());
    auto& slots = events[r.event_id];
    slots.resize(options.channels.size(), nullptr);
    if (slots[ci] == nullptr) {
      slots[ci] = &r;
    } else {
      ++st.duplicate_records;
      if (r.record_id < slots[ci]->record_id) slots[ci] = &r;
    }
  }

  std::vector<MultiChannelEpoch> out;
  for (const auto& [event_id, slots] : events) {
    const bool complete =
        std::all_of(slots.begin(), slots.end(),
                    [](const SignalRecord* r) { return r != nullptr; });
    if (!complete) {
      ++st.dropped_missing_channel;
      continue;
    }
    const int code = slots.front()->label_code;
    if (code < -1 || code > 9) {
      ++st.dropped_invalid_label;
      continue;
    }
    MultiChannelEpoch epoch;
    epoch.event_id = event_id;
    epoch.channel_names = options.channels;
    epoch.label = code == -1 ? Label::non_digit() : Label::digit(code);
    epoch.channels.reserve(slots.size());
    for (const auto* r : slots)
      epoch.channels.push_back(resample_linear(r->samples, n));
    out.push_back(std::move(epoch));
    ++st.epochs;
  }
  return out;
}

namespace {

// Deterministic 1/f background: per-bin amplitude scale/sqrt(k) with a
// seeded random phase, synthesized directly as a cosine sum.
std::vector<double> pink_noise(std::size_t n, double scale, Rng& rng) {
  std::vector<double> x(n, 0.0);
  const std::size_t bins = n / 2;
  for (std::size_t k = 1; k < bins; ++k) {
    const double amp = scale / std::sqrt(double(k));
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double w = 2.0 * std::numbers::pi * double(k) / double(n);
    for (std::size_t t = 0; t < n; ++t)
      x[t] += amp * std::cos(w * double(t) + phase);
  }
  return x;
}

} // namespace

MultiChannelEpoch synth_epoch(SynthClass cls, std::uint64_t seed,
                              std::size_t n, const SynthOptions& options) {
  MultiChannelEpoch epoch;
  epoch.event_id = std::int64_t(seed);
  epoch.channel_names = options.channels;
  epoch.label =
      cls == SynthClass::A ? Label::digit(0) : Label::non_digit();
  epoch.duration_s = double(n) / options.sample_rate_hz;

  const double tone_hz =
      cls == SynthClass::A ? options.freq_a_hz : options.freq_b_hz;
  const double w =
      2.0 * std::numbers::pi * tone_hz / options.sample_rate_hz;

  for (std::size_t c = 0; c < options.channels.size(); ++c) {
    Rng rng(Rng::mix(seed, (std::uint64_t(cls == SynthClass::B) << 32) | c));
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    auto x = pink_noise(n, options.noise_scale, rng);
    for (std::size_t t = 0; t < n; ++t)
      x[t] += std::sin(w * double(t) + phase);
    epoch.channels.push_back(std::move(x));
  }
  return epoch;
}

double rms(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / double(x.size()));
}

Mixed mix_at_snr(const std::vector<double>& clean,
                 const std::vector<double>& noise, double snr_db) {
  if (clean.size() != noise.size())
    throw ShapeError("mix_at_snr: length mismatch");
  const double rc = rms(clean);
  const double rn = rms(noise);
  if (rc == 0.0) throw ZeroSignalError("mix_at_snr: clean signal has zero RMS");
  if (rn == 0.0) throw ZeroSignalError("mix_at_snr: noise signal has zero RMS");

  Mixed out;
  out.lambda = rc / (rn * std::pow(10.0, snr_db / 20.0));
  out.mixed.resize(clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i)
    out.mixed[i] = clean[i] + out.lambda * noise[i];
  return out;
}

double measure_snr(const std::vector<double>& clean,
                   const std::vector<double>& scaled_noise) {
  if (clean.size() != scaled_noise.size())
    throw ShapeError("measure_snr: length mismatch");
  const double rc = rms(clean);
  const double rn = rms(scaled_noise);
  if (rc == 0.0 || rn == 0.0)
    throw ZeroSignalError("measure_snr: zero-RMS input");
  return 20.0 * std::log10(rc / rn);
}

} // namespace eegflow::sig
