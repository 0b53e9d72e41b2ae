#include "thunder/postfx.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "thunder/biquad.hpp"
#include "thunder/convolve.hpp"
#include "thunder/errors.hpp"
#include "thunder/noise.hpp"
#include "thunder/wav.hpp"

namespace thunder::fx {

std::vector<double> feedback_delay(std::span<const double> in, const FeedbackSpec& spec,
                                   double sample_rate) {
  if (!(spec.feedback >= 0.0 && spec.feedback < 1.0))
    throw std::invalid_argument("feedback must lie in [0, 1)");
  if (!(spec.delay_time >= 0.0)) throw std::invalid_argument("delay time must be non-negative");

  std::vector<double> out(in.begin(), in.end());
  const auto delay = static_cast<std::size_t>(std::llround(spec.delay_time * sample_rate));
  if (spec.feedback == 0.0) return out;
  if (delay == 0) {
    for (double& v : out) v /= 1.0 - spec.feedback;
    return out;
  }
  for (std::size_t n = delay; n < out.size(); ++n) out[n] += spec.feedback * out[n - delay];
  return out;
}

PanGains pan_gains(const PanSpec& spec) {
  if (!(spec.azimuth >= -kMaxAzimuth && spec.azimuth <= kMaxAzimuth))
    throw std::invalid_argument("azimuth must lie in [-60, 60] degrees");
  const double phi = (spec.azimuth + kMaxAzimuth) / (2.0 * kMaxAzimuth) * (std::numbers::pi / 2.0);
  return {std::cos(phi), std::sin(phi)};
}

Signal pan(std::span<const double> mono, const PanSpec& spec, double sample_rate) {
  const auto g = pan_gains(spec);
  std::vector<double> left(mono.size()), right(mono.size());
  for (std::size_t i = 0; i < mono.size(); ++i) {
    left[i] = mono[i] * g.left;
    right[i] = mono[i] * g.right;
  }
  return Signal::stereo(std::move(left), std::move(right), sample_rate);
}

Signal pan(const Signal& in, const PanSpec& spec) {
  if (in.channels() == 1) return pan(in.channel(0), spec, in.sample_rate());

  const double position = spec.azimuth / kMaxAzimuth;
  if (!(position >= -1.0 && position <= 1.0))
    throw std::invalid_argument("azimuth must lie in [-60, 60] degrees");
  const double x = position <= 0.0 ? position + 1.0 : position;
  const double gl = std::cos(x * std::numbers::pi / 2.0);
  const double gr = std::sin(x * std::numbers::pi / 2.0);

  const auto inl = in.channel(0);
  const auto inr = in.channel(1);
  std::vector<double> left(in.frames()), right(in.frames());
  for (std::size_t i = 0; i < in.frames(); ++i) {
    if (position <= 0.0) {
      left[i] = inl[i] + inr[i] * gl;
      right[i] = inr[i] * gr;
    } else {
      left[i] = inl[i] * gl;
      right[i] = inr[i] + inl[i] * gr;
    }
  }
  return Signal::stereo(std::move(left), std::move(right), in.sample_rate());
}

Placement draw_placement(std::uint64_t seed) {
  dsp::NoiseStream stream(seed, "placement");
  Placement p;
  p.pan.azimuth = stream.uniform(-kMaxAzimuth, kMaxAzimuth);
  p.spread_delay = stream.uniform(kSpreadDelayMin, kSpreadDelayMax);
  p.delayed_channel = stream.next_unit() < 0.5 ? 0 : 1;
  return p;
}

Signal spatialize(const Signal& in, const Placement& placement) {
  Signal out = pan(in, placement.pan);
  const auto shift =
      static_cast<std::size_t>(std::llround(placement.spread_delay * in.sample_rate()));
  if (shift == 0) return out;
  auto ch = out.channel(static_cast<std::size_t>(placement.delayed_channel));
  if (shift >= ch.size()) {
    std::fill(ch.begin(), ch.end(), 0.0);
    return out;
  }
  std::move_backward(ch.begin(), ch.end() - static_cast<std::ptrdiff_t>(shift), ch.end());
  std::fill(ch.begin(), ch.begin() + static_cast<std::ptrdiff_t>(shift), 0.0);
  return out;
}

Signal reverb(const Signal& in, const Signal& ir) {
  if (in.channels() != 1) throw std::invalid_argument("reverb: input must be mono");
  if (ir.empty()) throw std::invalid_argument("reverb: empty impulse response");
  const std::size_t out_len = in.frames() + ir.frames() - 1;
  Signal out(ir.channels(), out_len, in.sample_rate());
  if (in.empty()) return out;

  // Convolve only the non-silent part so leading zeros stay exactly zero.
  const auto x = in.channel(0);
  const auto first = std::find_if(x.begin(), x.end(), [](double v) { return v != 0.0; });
  if (first == x.end()) return out;
  const auto last = std::find_if(x.rbegin(), x.rend(), [](double v) { return v != 0.0; }).base();
  const auto offset = static_cast<std::size_t>(first - x.begin());
  const std::span<const double> active(&*first, static_cast<std::size_t>(last - first));

  auto place = [&](const std::vector<double>& wet, std::size_t c) {
    std::copy(wet.begin(), wet.end(), out.channel(c).begin() + static_cast<std::ptrdiff_t>(offset));
  };
  if (ir.channels() == 2 && std::min(active.size(), ir.frames()) > 32) {
    const auto wet = dsp::convolve_fft_pair(active, ir.channel(0), ir.channel(1));
    place(wet[0], 0);
    place(wet[1], 1);
  } else {
    for (std::size_t c = 0; c < ir.channels(); ++c) place(dsp::convolve(active, ir.channel(c)), c);
  }
  return out;
}

Signal synthesize_beach_ir(std::uint64_t seed, const BeachIrSpec& spec, double sample_rate) {
  if (!(spec.rt60 > 0.0 && spec.length > 0.0 && spec.peak > 0.0))
    throw std::invalid_argument("beach IR: rt60, length and peak must be positive");
  const auto frames = static_cast<std::size_t>(std::llround(spec.length * sample_rate));
  // Amplitude falls 60 dB over rt60.
  const double decay = std::log(1000.0) / (spec.rt60 * sample_rate);

  Signal ir(2, frames, sample_rate);
  for (std::size_t c = 0; c < 2; ++c) {
    dsp::NoiseStream stream(seed, c == 0 ? "beach-ir/left" : "beach-ir/right");
    auto tail = dsp::white_noise(stream, frames);
    for (std::size_t n = 0; n < frames; ++n)
      tail[n] *= 0.5 * std::exp(-decay * static_cast<double>(n));
    tail = dsp::biquad_process({dsp::FilterKind::lowpass, spec.tilt_hz, dsp::kButterworthQ}, tail,
                               sample_rate);
    auto ch = ir.channel(c);
    std::copy(tail.begin(), tail.end(), ch.begin());
    if (!ch.empty()) ch[0] += 1.0;  // direct sound
  }

  double peak = 0.0;
  for (std::size_t c = 0; c < 2; ++c)
    for (double v : ir.channel(c)) peak = std::max(peak, std::abs(v));
  if (peak > 0.0)
    for (std::size_t c = 0; c < 2; ++c)
      for (double& v : ir.channel(c)) v *= spec.peak / peak;
  return ir;
}

Signal resample_linear(const Signal& in, double target_rate) {
  if (!(target_rate > 0.0)) throw std::invalid_argument("resample: target rate must be positive");
  if (in.sample_rate() == target_rate || in.empty()) {
    Signal out(in.channels() == 0 ? 1 : in.channels(), in.frames(), target_rate);
    for (std::size_t c = 0; c < in.channels(); ++c)
      std::copy(in.channel(c).begin(), in.channel(c).end(), out.channel(c).begin());
    return out;
  }
  const double step = in.sample_rate() / target_rate;
  const auto frames = static_cast<std::size_t>(
      std::floor(static_cast<double>(in.frames() - 1) / step)) + 1;
  Signal out(in.channels(), frames, target_rate);
  for (std::size_t c = 0; c < in.channels(); ++c) {
    const auto src = in.channel(c);
    auto dst = out.channel(c);
    for (std::size_t n = 0; n < frames; ++n) {
      const double pos = static_cast<double>(n) * step;
      const auto i = static_cast<std::size_t>(pos);
      const double frac = pos - static_cast<double>(i);
      const double a = src[std::min(i, src.size() - 1)];
      const double b = src[std::min(i + 1, src.size() - 1)];
      dst[n] = a + (b - a) * frac;
    }
  }
  return out;
}

Signal load_impulse_response(const std::filesystem::path& path, double sample_rate) {
  Signal raw = read_wav(path);
  if (raw.channels() < 1 || raw.channels() > 2)
    throw WavError("impulse response must have 1 or 2 channels: " + path.string());
  if (raw.empty()) throw WavError("impulse response has no samples: " + path.string());
  return resample_linear(raw, sample_rate);
}

}  // namespace thunder::fx
