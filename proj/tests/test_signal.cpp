#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "eegflow/rng.hpp"
#include "eegflow/signal.hpp"
#include "eegflow/spectral.hpp"
#include "oracles.hpp"

using namespace eegflow;
using namespace eegflow::sig;

TEST_CASE("parse_record_line round-trips a well-formed line") {
  const auto parsed = parse_record_line("1\t10\tMU\tTP9\t5\t3\t1.0,2.0,3.0");
  CHECK_FALSE(parsed.sample_count_corrected);
  const auto& r = parsed.record;
  CHECK(r.record_id == 1);
  CHECK(r.event_id == 10);
  CHECK(r.device == "MU");
  CHECK(r.channel == "TP9");
  CHECK(r.label_code == 5);
  CHECK(r.sample_count == 3);
  CHECK(r.samples == std::vector<double>{1.0, 2.0, 3.0});

  // parse(format(r)) = r
  const auto again = parse_record_line(format_record_line(r)).record;
  CHECK(again == r);
}

TEST_CASE("parse_record_line corrects a wrong declared size") {
  const auto parsed = parse_record_line("1\t10\tMU\tTP9\t5\t4\t1.0,2.0,3.0");
  CHECK(parsed.sample_count_corrected);
  CHECK(parsed.record.sample_count == 3);
  CHECK(parsed.record.samples.size() == 3);
}

TEST_CASE("parse_record_line rejects short and malformed lines") {
  CHECK_THROWS_AS(parse_record_line("1\t10\tMU", 17), FieldCountError);
  CHECK_THROWS_AS(parse_record_line("1\t10\tMU\tTP9\t5\t3\t1.0,xyz,3.0", 3),
                  NumericParseError);
  CHECK_THROWS_AS(parse_record_line("a\t10\tMU\tTP9\t5\t3\t1.0", 3),
                  NumericParseError);
  try {
    parse_record_line("1\t10\tMU", 17);
  } catch (const FieldCountError& e) {
    CHECK(e.line_no == 17);
  }
}

TEST_CASE("parse_record_line tolerates surrounding whitespace") {
  const auto r =
      parse_record_line(" 1 \t 10\tMU \t TP9\t 5\t3\t 1.0 , 2.0 ,3.0 ").record;
  CHECK(r.channel == "TP9");
  CHECK(r.samples == std::vector<double>{1.0, 2.0, 3.0});
}

namespace {

SignalRecord make_record(std::int64_t event, const std::string& channel,
                         int code, std::size_t samples,
                         std::int64_t record_id = 0) {
  SignalRecord r;
  r.record_id = record_id;
  r.event_id = event;
  r.device = "MU";
  r.channel = channel;
  r.label_code = code;
  r.samples.resize(samples);
  for (std::size_t i = 0; i < samples; ++i) r.samples[i] = double(i % 7);
  r.sample_count = samples;
  return r;
}

} // namespace

TEST_CASE("assemble_epochs builds complete events and resamples") {
  std::vector<SignalRecord> records;
  for (const auto* ch : {"FP1", "FP2", "TP9", "TP10"})
    records.push_back(make_record(7, ch, 3, 440));
  AssembleStats stats;
  const auto epochs = assemble_epochs(records, 512, {}, &stats);
  REQUIRE(epochs.size() == 1);
  CHECK(epochs[0].event_id == 7);
  CHECK(epochs[0].label == Label::digit(3));
  for (const auto& c : epochs[0].channels) CHECK(c.size() == 512);
  CHECK(stats.epochs == 1);
}

TEST_CASE("assemble_epochs drops events with missing channels") {
  std::vector<SignalRecord> records;
  for (const auto* ch : {"FP1", "FP2", "TP9"})
    records.push_back(make_record(1, ch, 2, 100));
  AssembleStats stats;
  const auto epochs = assemble_epochs(records, 64, {}, &stats);
  CHECK(epochs.empty());
  CHECK(stats.dropped_missing_channel == 1);
}

TEST_CASE("assemble_epochs maps code -1 to the non-digit label") {
  std::vector<SignalRecord> records;
  for (const auto* ch : {"FP1", "FP2", "TP9", "TP10"})
    records.push_back(make_record(2, ch, -1, 100));
  const auto epochs = assemble_epochs(records, 64);
  REQUIRE(epochs.size() == 1);
  CHECK(epochs[0].label == Label::non_digit());
  CHECK_FALSE(epochs[0].label.is_digit());
}

TEST_CASE("assemble_epochs label partition and channel aliasing") {
  std::vector<SignalRecord> records;
  for (int event = 0; event < 11; ++event)
    for (const auto* ch : {"AF7", "FP2", "TP9", "TP10"})
      records.push_back(make_record(event, ch, event - 1, 64));
  AssembleOptions opts;
  opts.aliases = {{"AF7", "FP1"}};
  const auto epochs = assemble_epochs(records, 64, opts);
  REQUIRE(epochs.size() == 11);
  for (const auto& e : epochs) {
    const bool digit = e.label.is_digit();
    const bool non_digit = e.label == Label::non_digit();
    CHECK(digit != non_digit);
    if (digit) CHECK((e.label.code >= 0 && e.label.code <= 9));
  }
}

TEST_CASE("assemble_epochs is input-order independent") {
  std::vector<SignalRecord> records;
  std::int64_t rid = 0;
  for (const auto* ch : {"FP1", "FP2", "TP9", "TP10"})
    records.push_back(make_record(7, ch, 3, 64, rid++));
  auto shuffled = records;
  std::reverse(shuffled.begin(), shuffled.end());
  const auto a = assemble_epochs(records, 32);
  const auto b = assemble_epochs(shuffled, 32);
  REQUIRE(a.size() == b.size());
  CHECK(a[0].channels == b[0].channels);
}

TEST_CASE("resample_linear preserves endpoints and lengths") {
  const std::vector<double> x{1.0, 2.0, 4.0, 8.0};
  const auto y = resample_linear(x, 7);
  CHECK(y.size() == 7);
  CHECK(y.front() == doctest::Approx(1.0));
  CHECK(y.back() == doctest::Approx(8.0));
  CHECK(y[2] == doctest::Approx(2.0)); // source position 1.0
}

TEST_CASE("synth_epoch is a pure function of class, seed, and length") {
  const auto a1 = synth_epoch(SynthClass::A, 1, 512);
  const auto a2 = synth_epoch(SynthClass::A, 1, 512);
  CHECK(a1.channels == a2.channels); // bit identical

  const auto a3 = synth_epoch(SynthClass::A, 2, 512);
  CHECK(a1.channels != a3.channels);
}

TEST_CASE("synth_epoch dominant spectral bin is class-determined") {
  // 10 Hz at 256 Hz over 512 samples -> bin 20; 22 Hz -> bin 44
  for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
    const auto a = synth_epoch(SynthClass::A, seed, 512);
    const auto b = synth_epoch(SynthClass::B, seed, 512);
    for (std::size_t c = 0; c < 4; ++c) {
      const auto pa = spectral::one_sided_power_spectrum(a.channels[c]);
      const auto pb = spectral::one_sided_power_spectrum(b.channels[c]);
      const auto arg_a =
          std::max_element(pa.bins.begin(), pa.bins.end()) - pa.bins.begin();
      const auto arg_b =
          std::max_element(pb.bins.begin(), pb.bins.end()) - pb.bins.begin();
      CHECK(arg_a == 20);
      CHECK(arg_b == 44);
    }
  }
}

TEST_CASE("synth_epoch labels realize the open-set split") {
  CHECK(synth_epoch(SynthClass::A, 0, 64).label.is_digit());
  CHECK(synth_epoch(SynthClass::B, 0, 64).label == Label::non_digit());
}

TEST_CASE("mix_at_snr at 0 dB equalizes RMS") {
  Rng rng(11);
  std::vector<double> clean(256), noise(256);
  for (auto& v : clean) v = rng.gaussian();
  for (auto& v : noise) v = rng.gaussian() * 3.0;
  const auto m = mix_at_snr(clean, noise, 0.0);
  std::vector<double> scaled(noise.size());
  for (std::size_t i = 0; i < noise.size(); ++i)
    scaled[i] = m.lambda * noise[i];
  CHECK(rms(clean) == doctest::Approx(rms(scaled)).epsilon(1e-12));
}

TEST_CASE("mix_at_snr lambda matches the closed form at unit RMS") {
  std::vector<double> clean(64), noise(64);
  for (std::size_t i = 0; i < 64; ++i) {
    clean[i] = (i % 2 == 0) ? 1.0 : -1.0;
    noise[i] = (i % 2 == 0) ? 1.0 : -1.0;
  }
  const auto m = mix_at_snr(clean, noise, 2.0);
  CHECK(m.lambda == doctest::Approx(std::pow(10.0, -0.1)).epsilon(1e-12));
}

TEST_CASE("SNR round-trip across the benchmark range") {
  Rng rng(5);
  for (double snr = -7.0; snr <= 2.0 + 1e-9; snr += 0.5) {
    std::vector<double> clean(128), noise(128);
    for (auto& v : clean) v = rng.gaussian() * 2.0 + 0.3;
    for (auto& v : noise) v = rng.gaussian();
    const auto m = mix_at_snr(clean, noise, snr);
    std::vector<double> scaled(noise.size());
    for (std::size_t i = 0; i < noise.size(); ++i)
      scaled[i] = m.lambda * noise[i];
    CHECK(measure_snr(clean, scaled) == doctest::Approx(snr).epsilon(1e-9));
  }
}

TEST_CASE("measure_snr equals the direct formula on random input") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(97), b(97);
    for (auto& v : a) v = rng.uniform(-2.0, 2.0) + 0.1;
    for (auto& v : b) v = rng.uniform(-1.0, 1.0) + 0.05;
    const double direct = 20.0 * std::log10(rms(a) / rms(b));
    CHECK(measure_snr(a, b) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("measure_snr scaling noise by 1/10 adds 20 dB") {
  std::vector<double> clean(32, 1.0), noise(32, 0.5);
  const double base = measure_snr(clean, noise);
  std::vector<double> tenth(32, 0.05);
  CHECK(measure_snr(clean, tenth) == doctest::Approx(base + 20.0));
}

TEST_CASE("zero-RMS inputs are rejected") {
  const std::vector<double> zero(16, 0.0), ones(16, 1.0);
  CHECK_THROWS_AS((void)mix_at_snr(zero, ones, 0.0), ZeroSignalError);
  CHECK_THROWS_AS((void)mix_at_snr(ones, zero, 0.0), ZeroSignalError);
  CHECK_THROWS_AS((void)measure_snr(ones, zero), ZeroSignalError);
}
