#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "thunder/analysis.hpp"
#include "thunder/errors.hpp"
#include "thunder/noise.hpp"
#include "thunder/wav.hpp"

using namespace thunder;

namespace {

std::filesystem::path scratch(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / "thunder-io-test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

Signal noisy_stereo(std::size_t n) {
  dsp::NoiseStream s(4, "wav");
  std::vector<double> l(n), r(n);
  for (auto& v : l) v = s.next_bipolar();
  for (auto& v : r) v = 0.5 * s.next_bipolar();
  l[0] = -1.0;
  r[0] = 1.0;
  return Signal::stereo(l, r);
}

void put16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(v & 0xff);
  b.push_back(v >> 8);
}
void put32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back((v >> (8 * i)) & 0xff);
}

}  // namespace

TEST_SUITE("wav") {
  TEST_CASE("float32 round trip is exact to float precision") {
    const Signal s = noisy_stereo(1000);
    const auto bytes = encode_wav(s, SampleFormat::float32);
    CHECK(std::memcmp(bytes.data(), "RIFF", 4) == 0);
    CHECK(std::memcmp(bytes.data() + 8, "WAVE", 4) == 0);
    const Signal back = decode_wav(bytes);
    REQUIRE(back.channels() == 2);
    REQUIRE(back.frames() == 1000);
    CHECK(back.sample_rate() == 44100.0);
    for (std::size_t i = 0; i < 1000; ++i)
      CHECK(back.channel(1)[i] == static_cast<double>(static_cast<float>(s.channel(1)[i])));
  }

  TEST_CASE("pcm16 round trip within one LSB, full scale preserved") {
    const Signal s = noisy_stereo(1000);
    const Signal back = decode_wav(encode_wav(s, SampleFormat::pcm16));
    CHECK(back.channel(0)[0] == -1.0);
    CHECK(back.channel(1)[0] == 1.0);
    for (std::size_t i = 0; i < 1000; ++i)
      CHECK(std::abs(back.channel(0)[i] - s.channel(0)[i]) <= 1.0 / 32767.0);
  }

  TEST_CASE("24-bit PCM decodes") {
    std::vector<std::uint8_t> b;
    b.insert(b.end(), {'R', 'I', 'F', 'F'});
    put32(b, 36 + 6);
    b.insert(b.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
    put32(b, 16);
    put16(b, 1);
    put16(b, 1);
    put32(b, 48000);
    put32(b, 48000 * 3);
    put16(b, 3);
    put16(b, 24);
    b.insert(b.end(), {'d', 'a', 't', 'a'});
    put32(b, 6);
    b.insert(b.end(), {0x00, 0x00, 0x40, 0x00, 0x00, 0x80});  // +0.5, -1.0
    const Signal s = decode_wav(b);
    CHECK(s.sample_rate() == 48000.0);
    REQUIRE(s.frames() == 2);
    CHECK(s.channel(0)[0] == doctest::Approx(0.5));
    CHECK(s.channel(0)[1] == doctest::Approx(-1.0));
  }

  TEST_CASE("malformed input is rejected") {
    const std::vector<std::uint8_t> junk = {'R', 'I', 'F', 'F', 0, 0};
    CHECK_THROWS_AS(decode_wav(junk), WavError);
    auto bytes = encode_wav(noisy_stereo(10), SampleFormat::pcm16);
    bytes[20] = 0x55;  // format tag
    CHECK_THROWS_AS(decode_wav(bytes), WavError);
  }

  TEST_CASE("file round trip and unwritable destination") {
    const auto path = scratch("rt.wav");
    const Signal s = noisy_stereo(500);
    write_wav(s, path, SampleFormat::float32);
    CHECK(read_wav(path).frames() == 500);
    CHECK_THROWS(write_wav(s, "/nonexistent-dir/x.wav", SampleFormat::pcm16));
    CHECK_THROWS(read_wav(scratch("missing.wav")));
  }
}

TEST_SUITE("analysis") {
  TEST_CASE("onset, peak and rms") {
    std::vector<double> x(1000, 0.0);
    x[500] = 5e-5;
    x[600] = -0.5;
    CHECK(analysis::onset_index(x) == 600u);
    CHECK(analysis::peak(x) == 0.5);
    CHECK(analysis::to_dbfs(1.0) == 0.0);
    CHECK(analysis::to_dbfs(0.5) == doctest::Approx(-6.0206));
    CHECK_FALSE(analysis::onset_index(std::vector<double>(10, 0.0)));
    std::vector<double> sq(100, 0.5);
    CHECK(analysis::rms(sq) == doctest::Approx(0.5));
  }

  TEST_CASE("band fractions of pure tones") {
    auto tone = [](double f) {
      std::vector<double> x(44100);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(2.0 * std::numbers::pi * f * i / 44100.0);
      return x;
    };
    CHECK(analysis::band_fractions(tone(100.0)).low > 0.99);
    CHECK(analysis::band_fractions(tone(700.0)).mid > 0.99);
    CHECK(analysis::band_fractions(tone(5000.0)).high > 0.99);
    CHECK(analysis::spectral_peak_hz(tone(440.0)) == doctest::Approx(440.0).epsilon(0.03));
    CHECK(analysis::spectral_centroid_hz(tone(1000.0)) == doctest::Approx(1000.0).epsilon(0.02));
    CHECK(analysis::energy_fraction_below(tone(150.0), 200.0) > 0.99);
  }

  TEST_CASE("decay curve of an exponential") {
    std::vector<double> x(44100 * 2);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::exp(-6.9078 * i / 44100.0);  // -60 dB/s
    const auto t = analysis::decay_time(x, -30.0);
    REQUIRE(t);
    CHECK(*t == doctest::Approx(0.5).epsilon(0.01));
    CHECK(analysis::energy_decay_db(x).front() == doctest::Approx(0.0));
  }

  TEST_CASE("metrics of a signal") {
    std::vector<double> x(44100, 0.0);
    for (std::size_t i = 22050; i < 44100; ++i) x[i] = 0.25;
    const auto m = analysis::analyze(Signal::mono(x));
    CHECK(m.duration == doctest::Approx(1.0));
    REQUIRE(m.onset);
    CHECK(*m.onset == doctest::Approx(0.5));
    CHECK(m.rms_envelope.size() == 10);
    CHECK(m.rms_envelope.front() == 0.0);
    CHECK(m.rms_envelope.back() == doctest::Approx(0.25));
    CHECK_THROWS(analysis::analyze(Signal{}));
  }
}
