#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "thunder/biquad.hpp"
#include "thunder/noise.hpp"
#include "thunder/params.hpp"
#include "thunder/ramp.hpp"
#include "thunder/signal.hpp"

namespace thunder::models {

/// Constants that differ between the original model (v1) and the revised one.
struct PresetConstants {
  double strike_center_offset_hz = 0.0;
  double strike_q = 10.0;
  double deepener_highpass_hz = 15.0;
  double afterimage_gain = 1.0;
  bool master_compressor = false;
};

PresetConstants preset_constants(Preset preset) noexcept;

/// Where a sub-model sits on the render timeline.
struct Timeline {
  double sample_rate = kSampleRate;
  double onset = 0.0;       // d, seconds
  std::size_t frames = 0;   // output length

  std::size_t onset_index() const noexcept;
};

/// Filters are run over this many samples of source material before t = 0 so
/// they are settled when the envelope opens. A whole number of control blocks.
inline constexpr std::size_t kPreroll = 344 * dsp::kControlBlock;

/// Seed for one named sub-model derived from the master render seed.
std::uint64_t derive_seed(std::uint64_t master, std::string_view name) noexcept;

// ---------------------------------------------------------------------------
// Multi-strike lightning

inline constexpr int kMaxStrikes = 5;
inline constexpr int kImpulseCount = 20;
inline constexpr int kStrikeEnvelopes = 4;
inline constexpr int kFilterBankSize = 2 * kStrikeEnvelopes;
inline constexpr double kSplitProbability = 0.25;
inline constexpr double kSplitGain = 0.7;
inline constexpr double kSplitOffsetMin = 0.010;
inline constexpr double kSplitOffsetMax = 0.080;

enum class StrikeSource { impulses, noise };

/// Random quantities for one lightning branch.
struct StrikeDraw {
  double r = 0.5;               // in (0, 1): sets envelope length and filter center
  std::vector<double> onsets;   // impulse times t_r in seconds, impulse mode only
};

struct StrikeEntry {
  int ordinal = 1;              // 1-based
  StrikeSource source = StrikeSource::impulses;
  int envelope_index = 1;       // m in 1..4
  StrikeDraw main;
  bool split = false;
  StrikeDraw branch;            // valid when split
  double branch_offset = 0.0;   // seconds after the main branch
};

struct StrikePlan {
  std::vector<StrikeEntry> strikes;

  int count() const noexcept { return static_cast<int>(strikes.size()); }
};

/// Draws the strike count uniformly from 1..5 and every per-strike quantity.
/// Impulse onsets within a branch land on distinct samples at `sample_rate`.
StrikePlan plan_strikes(std::uint64_t seed, double sample_rate = kSampleRate);

/// Even ordinals are noise-driven, odd ones are impulse trains.
StrikeSource strike_source_kind(int ordinal) noexcept;

/// ((ordinal - 1) mod 4) + 1.
int strike_envelope_index(int ordinal) noexcept;

/// End of the strike envelope, d' = d + 240 (1.4 - r)^5 ms, in seconds.
/// Throws std::invalid_argument unless 0 < r < 1.
double strike_envelope_bounds(double d, double r);

/// Initial band-pass center r * 1200 + 100 Hz, shifted by the preset offset.
double strike_center_hz(double r, Preset preset) noexcept;

/// Source material for one branch, `frames` long. Noise mode fills every
/// sample from `stream`; impulse mode places unit spikes at
/// onset_index + round(t_r * sample_rate).
std::vector<double> strike_source(StrikeSource kind, const StrikeDraw& draw, std::size_t frames,
                                  std::size_t onset_index, dsp::NoiseStream& stream,
                                  double sample_rate = kSampleRate);

/// The two band-pass filters of the bank assigned to envelope m.
struct StrikeFilterPair {
  std::array<int, 2> bank_slots{};   // (2e, 2e + 1) with e = m - 1
  dsp::CutoffRamp ramp;              // center f -> f/2 over the strike period
  double q = 10.0;
};

StrikeFilterPair strike_filter_pair(double r, int envelope_index, const dsp::Period& period,
                                    Preset preset);

/// Runs `x` (first sample at time t0) through the series band-pass pair.
std::vector<double> strike_filter_bank(std::span<const double> x, const StrikeFilterPair& pair,
                                       double t0, double sample_rate = kSampleRate);

struct StrikeBranchConfig {
  int ordinal = 1;
  bool is_split_branch = false;
  StrikeSource source = StrikeSource::impulses;
  StrikeDraw draw;
  dsp::Envelope envelope;       // linear, peak -> 0 over [onset, d']
  StrikeFilterPair filters;
};

struct MultiStrikeConfig {
  double peak_gain = 0.0;       // initial_strike * 2
  StrikePlan plan;
  std::vector<StrikeBranchConfig> branches;
};

MultiStrikeConfig describe_multistrike(const ThunderParams& params, double onset,
                                       std::uint64_t seed, double sample_rate = kSampleRate);

/// Dry sum of every enveloped strike branch (feedback and reverb are applied
/// by the post-processing chain).
std::vector<double> build_multistrike(const MultiStrikeConfig& config, const Timeline& timeline,
                                      std::uint64_t seed);

// ---------------------------------------------------------------------------
// Rumbler

struct RumblerConfig {
  dsp::Envelope envelope;        // undulating, rumble * 2.5 -> eps over [d, d + 9]
  dsp::CutoffRamp lowpass;       // 1000 Hz -> floor over [d, d + 12], both branches
  double lowpass_q = dsp::kButterworthQ;
  double self_modulation_hz = 10.0;
};

RumblerConfig describe_rumbler(const ThunderParams& params, double onset, std::uint64_t seed);

/// Intermediate and final rumbler signals, all `timeline.frames` long.
struct RumblerSignals {
  std::vector<double> gain;      // G_t
  std::vector<double> trigger;   // phasor driven at G_t + 1 Hz
  std::vector<double> rectified; // RN1 before gain
  std::vector<double> held;      // RN2 before self-scaling
  std::vector<double> output;
};

RumblerSignals build_rumbler_detailed(const RumblerConfig& config, const Timeline& timeline,
                                      std::uint64_t seed);
std::vector<double> build_rumbler(const RumblerConfig& config, const Timeline& timeline,
                                  std::uint64_t seed);

// ---------------------------------------------------------------------------
// Afterimage

struct AfterimageConfig {
  dsp::Envelope envelope;        // undulating, initial_strike * 2 -> eps over [d, d + 14]
  dsp::CutoffRamp lowpass;       // 33 Hz -> floor over [d, d + 14]
  double lowpass_q = dsp::kButterworthQ;
  double excitation_gain = 80.0;
  dsp::BiquadSpec bandpass{dsp::FilterKind::bandpass, 333.0, 4.0};
  double output_gain = 1.0;
};

AfterimageConfig describe_afterimage(const ThunderParams& params, double onset, std::uint64_t seed);

/// Clipped excitation clip(LP(WN1) * 80 * WN2), `timeline.frames` long.
std::vector<double> afterimage_excitation(const AfterimageConfig& config, const Timeline& timeline,
                                          std::uint64_t seed);
std::vector<double> build_afterimage(const AfterimageConfig& config, const Timeline& timeline,
                                     std::uint64_t seed);

// ---------------------------------------------------------------------------
// Deepener

struct DeepenerConfig {
  dsp::Envelope envelope;        // undulating, growl * 6 -> 0 over [d, d + 18.5]
  dsp::BiquadSpec lowpass1{dsp::FilterKind::lowpass, 60.0, 3.0};
  dsp::BiquadSpec highpass{dsp::FilterKind::highpass, 15.0, 3.0};
  double drive = 3.5;
  dsp::BiquadSpec lowpass2{dsp::FilterKind::lowpass, 80.0, 3.0};
};

DeepenerConfig describe_deepener(const ThunderParams& params, double onset, std::uint64_t seed);
std::vector<double> build_deepener(const DeepenerConfig& config, const Timeline& timeline,
                                   std::uint64_t seed);

/// Envelope periods (offsets from d) of the three sustained sub-models.
inline constexpr double kRumblerEnvelopeSeconds = 9.0;
inline constexpr double kRumblerFilterSeconds = 12.0;
inline constexpr double kAfterimageSeconds = 14.0;
inline constexpr double kDeepenerSeconds = 18.5;

}  // namespace thunder::models
