#include "thunder/submodels.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "thunder/phasor.hpp"

namespace thunder::models {

using dsp::Envelope;
using dsp::FilterKind;
using dsp::Period;
using dsp::RampLaw;

PresetConstants preset_constants(Preset preset) noexcept {
  PresetConstants c;
  if (preset == Preset::v2) {
    c.strike_center_offset_hz = -20.0;
    c.strike_q = 7.0;
    c.deepener_highpass_hz = 30.0;
    c.afterimage_gain = 0.4;
    c.master_compressor = true;
  }
  return c;
}

namespace {

std::size_t first_index_at_or_after(double t, double sample_rate) {
  if (t <= 0.0) return 0;
  auto n = static_cast<std::size_t>(std::ceil(t * sample_rate));
  while (n > 0 && static_cast<double>(n - 1) / sample_rate >= t) --n;
  while (static_cast<double>(n) / sample_rate < t) ++n;
  return n;
}

/// End gain for envelopes that decay "to epsilon": zero when the envelope
/// never opens, so a zeroed control yields digital silence.
double epsilon_floor(double start_gain) noexcept { return start_gain > 0.0 ? kEpsilon : 0.0; }

/// Multiplies `signal` (first sample at time t0) by the envelope in place.
void apply_envelope(std::span<double> signal, const Envelope& env, double t0, double sample_rate) {
  if (env.law == RampLaw::linear) {
    for (std::size_t i = 0; i < signal.size(); ++i)
      signal[i] *= env.gain_at(t0 + static_cast<double>(i) / sample_rate);
    return;
  }
  const dsp::UndulatingRamp ramp(env.start_gain, env.end_gain, env.period, env.seed, env.depth);
  for (std::size_t i = 0; i < signal.size(); ++i) {
    const double t = t0 + static_cast<double>(i) / sample_rate;
    double g;
    if (t < env.period.start)
      g = 0.0;
    else if (t >= env.period.end)
      g = env.end_gain;
    else
      g = ramp(t);
    signal[i] *= g;
  }
}

std::vector<double> noise_window(std::uint64_t seed, std::string_view name, std::size_t n) {
  dsp::NoiseStream stream(seed, name);
  return dsp::white_noise(stream, n);
}

double preroll_origin(double sample_rate) {
  return -static_cast<double>(kPreroll) / sample_rate;
}

}  // namespace

std::size_t Timeline::onset_index() const noexcept {
  return first_index_at_or_after(onset, sample_rate);
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view name) noexcept {
  return dsp::mix64(master ^ dsp::mix64(dsp::fnv1a(name) + 0x632be59bd9b4e019ULL));
}

// ---------------------------------------------------------------------------
// Multi-strike lightning

StrikeSource strike_source_kind(int ordinal) noexcept {
  return ordinal % 2 == 0 ? StrikeSource::noise : StrikeSource::impulses;
}

int strike_envelope_index(int ordinal) noexcept { return ((ordinal - 1) % kStrikeEnvelopes) + 1; }

double strike_envelope_bounds(double d, double r) {
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("strike envelope: r must lie in (0, 1)");
  return d + 0.240 * std::pow(1.4 - r, 5.0);
}

double strike_center_hz(double r, Preset preset) noexcept {
  return r * 1200.0 + 100.0 + preset_constants(preset).strike_center_offset_hz;
}

namespace {

StrikeDraw draw_branch(dsp::NoiseStream& stream, StrikeSource kind, double sample_rate) {
  StrikeDraw draw;
  draw.r = stream.next_open_unit();
  if (kind == StrikeSource::impulses) {
    std::set<long long> used;
    while (static_cast<int>(draw.onsets.size()) < kImpulseCount) {
      const double t = stream.next_unit() + kEpsilon;
      if (used.insert(std::llround(t * sample_rate)).second) draw.onsets.push_back(t);
    }
  }
  return draw;
}

}  // namespace

StrikePlan plan_strikes(std::uint64_t seed, double sample_rate) {
  dsp::NoiseStream stream(seed, "strike-plan");
  StrikePlan plan;
  const int count = stream.uniform_int(1, kMaxStrikes);
  for (int ordinal = 1; ordinal <= count; ++ordinal) {
    StrikeEntry e;
    e.ordinal = ordinal;
    e.source = strike_source_kind(ordinal);
    e.envelope_index = strike_envelope_index(ordinal);
    e.main = draw_branch(stream, e.source, sample_rate);
    e.split = stream.next_unit() < kSplitProbability;
    if (e.split) {
      e.branch = draw_branch(stream, e.source, sample_rate);
      e.branch_offset = stream.uniform(kSplitOffsetMin, kSplitOffsetMax);
    }
    plan.strikes.push_back(std::move(e));
  }
  return plan;
}

std::vector<double> strike_source(StrikeSource kind, const StrikeDraw& draw, std::size_t frames,
                                  std::size_t onset_index, dsp::NoiseStream& stream,
                                  double sample_rate) {
  if (kind == StrikeSource::noise) return dsp::white_noise(stream, frames);
  std::vector<double> x(frames, 0.0);
  for (double t : draw.onsets) {
    const auto idx = onset_index + static_cast<std::size_t>(std::llround(t * sample_rate));
    if (idx < frames) x[idx] = 1.0;
  }
  return x;
}

StrikeFilterPair strike_filter_pair(double r, int envelope_index, const Period& period,
                                    Preset preset) {
  StrikeFilterPair pair;
  const int e = envelope_index - 1;
  pair.bank_slots = {2 * e, 2 * e + 1};
  const double f = strike_center_hz(r, preset);
  pair.ramp = {f, 0.5 * f, period};
  pair.q = preset_constants(preset).strike_q;
  return pair;
}

std::vector<double> strike_filter_bank(std::span<const double> x, const StrikeFilterPair& pair,
                                       double t0, double sample_rate) {
  dsp::RampedBiquad first(FilterKind::bandpass, pair.q, pair.ramp, sample_rate);
  dsp::RampedBiquad second(FilterKind::bandpass, pair.q, pair.ramp, sample_rate);
  auto y = first.process(x, t0);
  return second.process(y, t0);
}

MultiStrikeConfig describe_multistrike(const ThunderParams& params, double onset,
                                       std::uint64_t seed, double sample_rate) {
  MultiStrikeConfig cfg;
  cfg.peak_gain = params.initial_strike * 2.0;
  cfg.plan = plan_strikes(seed, sample_rate);

  auto make_branch = [&](const StrikeEntry& e, const StrikeDraw& draw, double start, double peak,
                         bool split) {
    StrikeBranchConfig b;
    b.ordinal = e.ordinal;
    b.is_split_branch = split;
    b.source = e.source;
    b.draw = draw;
    const Period period{start, strike_envelope_bounds(start, draw.r)};
    b.envelope = Envelope{peak, 0.0, period, RampLaw::linear};
    b.filters = strike_filter_pair(draw.r, e.envelope_index, period, params.preset);
    return b;
  };

  for (const auto& e : cfg.plan.strikes) {
    cfg.branches.push_back(make_branch(e, e.main, onset, cfg.peak_gain, false));
    if (e.split)
      cfg.branches.push_back(
          make_branch(e, e.branch, onset + e.branch_offset, kSplitGain * cfg.peak_gain, true));
  }
  return cfg;
}

std::vector<double> build_multistrike(const MultiStrikeConfig& config, const Timeline& timeline,
                                      std::uint64_t seed) {
  const double fs = timeline.sample_rate;
  std::vector<double> out(timeline.frames, 0.0);
  if (config.peak_gain == 0.0) return out;

  for (const auto& b : config.branches) {
    const auto onset = static_cast<long long>(first_index_at_or_after(b.envelope.period.start, fs));
    const auto stop = std::min<long long>(
        static_cast<long long>(timeline.frames),
        static_cast<long long>(std::ceil(b.envelope.period.end * fs)) + 1);
    if (onset >= stop) continue;

    // Window: preroll before the branch onset through the envelope end.
    const long long w0 = onset - static_cast<long long>(kPreroll);
    const auto len = static_cast<std::size_t>(stop - w0);
    const double t0 = static_cast<double>(w0) / fs;

    const std::string name = "strike/" + std::to_string(b.ordinal) +
                             (b.is_split_branch ? "/branch" : "/main");
    dsp::NoiseStream stream(seed, name);
    auto x = strike_source(b.source, b.draw, len, kPreroll, stream, fs);
    auto y = strike_filter_bank(x, b.filters, t0, fs);
    apply_envelope(y, b.envelope, t0, fs);

    for (std::size_t i = kPreroll; i < len; ++i) {
      const long long n = w0 + static_cast<long long>(i);
      if (n >= 0 && n < static_cast<long long>(out.size())) out[static_cast<std::size_t>(n)] += y[i];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rumbler

RumblerConfig describe_rumbler(const ThunderParams& params, double onset, std::uint64_t seed) {
  RumblerConfig cfg;
  const double peak = params.rumble * 2.5;
  cfg.envelope = Envelope{peak, epsilon_floor(peak), {onset, onset + kRumblerEnvelopeSeconds},
                          RampLaw::undulating, derive_seed(seed, "envelope")};
  cfg.lowpass = {1000.0, 0.0, {onset, onset + kRumblerFilterSeconds}};
  return cfg;
}

RumblerSignals build_rumbler_detailed(const RumblerConfig& config, const Timeline& timeline,
                                      std::uint64_t seed) {
  const double fs = timeline.sample_rate;
  const std::size_t len = kPreroll + timeline.frames;
  const double t0 = preroll_origin(fs);

  dsp::RampedBiquad lp1(FilterKind::lowpass, config.lowpass_q, config.lowpass, fs);
  dsp::RampedBiquad lp2(FilterKind::lowpass, config.lowpass_q, config.lowpass, fs);
  const auto rectified = dsp::half_rectify(lp1.process(noise_window(seed, "wn1", len), t0));
  const auto smooth = lp2.process(noise_window(seed, "wn2", len), t0);

  std::vector<double> gain(len, 1.0);
  apply_envelope(gain, config.envelope, t0, fs);

  std::vector<double> frequency(len);
  std::transform(gain.begin(), gain.end(), frequency.begin(), [](double g) { return g + 1.0; });
  const auto trigger = dsp::phasor_run(frequency, fs);
  const auto held = dsp::sample_and_hold(smooth, trigger);

  // Split: a slow follower of the held signal sets its own amplitude.
  const auto follower = dsp::biquad_process(
      {FilterKind::lowpass, config.self_modulation_hz, dsp::kButterworthQ}, held, fs);

  std::vector<double> out(len);
  for (std::size_t i = 0; i < len; ++i) {
    const double scaled = held[i] * (0.5 + 0.5 * std::abs(follower[i]));
    out[i] = gain[i] * 0.5 * (rectified[i] + scaled);
  }

  auto tail = [&](const std::vector<double>& v) {
    return std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(kPreroll), v.end());
  };
  return {tail(gain), tail(trigger), tail(rectified), tail(held), tail(out)};
}

std::vector<double> build_rumbler(const RumblerConfig& config, const Timeline& timeline,
                                  std::uint64_t seed) {
  return build_rumbler_detailed(config, timeline, seed).output;
}

// ---------------------------------------------------------------------------
// Afterimage

AfterimageConfig describe_afterimage(const ThunderParams& params, double onset,
                                     std::uint64_t seed) {
  AfterimageConfig cfg;
  const double peak = params.initial_strike * 2.0;
  const Period period{onset, onset + kAfterimageSeconds};
  cfg.envelope = Envelope{peak, epsilon_floor(peak), period, RampLaw::undulating,
                          derive_seed(seed, "envelope")};
  cfg.lowpass = {33.0, 0.0, period};
  cfg.output_gain = preset_constants(params.preset).afterimage_gain;
  return cfg;
}

namespace {

std::vector<double> afterimage_excitation_window(const AfterimageConfig& config, std::size_t len,
                                                 double fs, std::uint64_t seed) {
  dsp::RampedBiquad lp(FilterKind::lowpass, config.lowpass_q, config.lowpass, fs);
  auto x = lp.process(noise_window(seed, "wn1", len), preroll_origin(fs));
  const auto modulator = noise_window(seed, "wn2", len);
  for (std::size_t i = 0; i < len; ++i) x[i] = x[i] * config.excitation_gain * modulator[i];
  dsp::clip_in_place(x);
  return x;
}

}  // namespace

std::vector<double> afterimage_excitation(const AfterimageConfig& config, const Timeline& timeline,
                                          std::uint64_t seed) {
  auto x = afterimage_excitation_window(config, kPreroll + timeline.frames, timeline.sample_rate,
                                        seed);
  return {x.begin() + static_cast<std::ptrdiff_t>(kPreroll), x.end()};
}

std::vector<double> build_afterimage(const AfterimageConfig& config, const Timeline& timeline,
                                     std::uint64_t seed) {
  const double fs = timeline.sample_rate;
  const std::size_t len = kPreroll + timeline.frames;
  auto y = dsp::biquad_process(config.bandpass,
                               afterimage_excitation_window(config, len, fs, seed), fs);
  apply_envelope(y, config.envelope, preroll_origin(fs), fs);
  std::vector<double> out(y.begin() + static_cast<std::ptrdiff_t>(kPreroll), y.end());
  for (double& v : out) v *= config.output_gain;
  return out;
}

// ---------------------------------------------------------------------------
// Deepener

DeepenerConfig describe_deepener(const ThunderParams& params, double onset, std::uint64_t seed) {
  DeepenerConfig cfg;
  cfg.envelope = Envelope{params.growl * 6.0, 0.0, {onset, onset + kDeepenerSeconds},
                          RampLaw::undulating, derive_seed(seed, "envelope")};
  cfg.highpass.frequency = preset_constants(params.preset).deepener_highpass_hz;
  return cfg;
}

std::vector<double> build_deepener(const DeepenerConfig& config, const Timeline& timeline,
                                   std::uint64_t seed) {
  const double fs = timeline.sample_rate;
  const std::size_t len = kPreroll + timeline.frames;
  auto x = dsp::biquad_process(config.lowpass1, noise_window(seed, "wn", len), fs);
  x = dsp::biquad_process(config.highpass, x, fs);
  for (double& v : x) v *= config.drive;
  dsp::clip_in_place(x);
  auto y = dsp::biquad_process(config.lowpass2, x, fs);
  apply_envelope(y, config.envelope, preroll_origin(fs), fs);
  return {y.begin() + static_cast<std::ptrdiff_t>(kPreroll), y.end()};
}

}  // namespace thunder::models
