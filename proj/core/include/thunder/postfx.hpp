#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "thunder/signal.hpp"

namespace thunder::fx {

// ---------------------------------------------------------------------------
// Feedback delay

struct FeedbackSpec {
  double delay_time = 0.6;  // seconds until the first echo
  double feedback = 0.15;   // echo ratio, [0, 1)
};

/// out[n] = in[n] + feedback * out[n - delay]. Output has the input's length.
/// Throws std::invalid_argument for feedback outside [0, 1) or negative delay.
std::vector<double> feedback_delay(std::span<const double> in, const FeedbackSpec& spec,
                                   double sample_rate = kSampleRate);

// ---------------------------------------------------------------------------
// Panning

inline constexpr double kMaxAzimuth = 60.0;

struct PanSpec {
  double azimuth = 0.0;  // degrees, [-60, 60]; negative is left
};

struct PanGains {
  double left = 0.0;
  double right = 0.0;
};

/// Equal-power law: phi maps [-60, 60] degrees onto [0, pi/2],
/// left = cos(phi), right = sin(phi).
PanGains pan_gains(const PanSpec& spec);

/// Mono input uses the equal-power gains. Stereo input is balanced the way a
/// stereo panner node does it: the far channel is folded into the near one
/// with the equal-power gains of the half-range position, so azimuth 0
/// passes both channels through unchanged.
Signal pan(const Signal& in, const PanSpec& spec);
Signal pan(std::span<const double> mono, const PanSpec& spec, double sample_rate = kSampleRate);

/// Random stereo placement of one sub-model: pan position plus a short
/// inter-channel delay on one side.
struct Placement {
  PanSpec pan;
  double spread_delay = 0.0;  // seconds
  int delayed_channel = 1;    // 0 = left, 1 = right
};

inline constexpr double kSpreadDelayMin = 0.005;
inline constexpr double kSpreadDelayMax = 0.030;

Placement draw_placement(std::uint64_t seed);

/// Pans and applies the spread delay. Output keeps the input length.
Signal spatialize(const Signal& in, const Placement& placement);

// ---------------------------------------------------------------------------
// Reverb

/// Convolves a mono signal with every channel of `ir`. Output has
/// in.frames() + ir.frames() - 1 frames and ir.channels() channels. Leading
/// silence of the input is preserved exactly.
Signal reverb(const Signal& in, const Signal& ir);

struct BeachIrSpec {
  double rt60 = 2.5;      // seconds
  double length = 3.0;    // seconds
  double tilt_hz = 4000.0;
  double peak = 0.5;
};

/// Stereo exponentially decaying seeded noise behind a direct-sound spike,
/// low-passed at `tilt_hz` and peak-normalized.
Signal synthesize_beach_ir(std::uint64_t seed, const BeachIrSpec& spec = {},
                           double sample_rate = kSampleRate);

/// Reads a RIFF WAV impulse response (PCM16 or float32, 1-2 channels) and
/// resamples it to `sample_rate` by linear interpolation. Throws WavError.
Signal load_impulse_response(const std::filesystem::path& path, double sample_rate = kSampleRate);

/// Linear-interpolation resampler.
Signal resample_linear(const Signal& in, double target_rate);

// ---------------------------------------------------------------------------
// Dynamics

struct CompressorSpec {
  double threshold = -20.0;  // dBFS
  double knee = 20.0;        // dB
  double ratio = 12.0;
  double attack = 0.0;       // seconds
  double release = 0.5;      // seconds
};

/// Throws std::invalid_argument if ratio < 1, knee < 0 or a time is negative.
void validate(const CompressorSpec& spec);

/// Static curve in dB. Identity up to threshold - knee/2, slope 1/ratio from
/// threshold + knee/2 along the line through (threshold, threshold), and a
/// quadratic blend between.
double compressor_curve_db(double input_db, const CompressorSpec& spec) noexcept;

/// Feed-forward compressor with stereo-linked peak detection. Gain changes are
/// smoothed in dB with one-pole attack/release; make-up gain is unity.
Signal compress(const Signal& in, const CompressorSpec& spec);
std::vector<double> compress(std::span<const double> in, const CompressorSpec& spec,
                             double sample_rate = kSampleRate);

}  // namespace thunder::fx
