#pragma once

#include <optional>
#include <span>
#include <vector>

#include "thunder/signal.hpp"

namespace thunder::analysis {

/// Onset threshold, -80 dBFS.
inline constexpr double kOnsetThreshold = 1e-4;
inline constexpr double kHopSeconds = 0.1;

/// Upper edges of the low and mid analysis bands.
inline constexpr double kLowBandHz = 200.0;
inline constexpr double kMidBandHz = 1300.0;

struct BandFractions {
  double low = 0.0;   // < 200 Hz
  double mid = 0.0;   // 200..1300 Hz
  double high = 0.0;  // > 1300 Hz
};

struct Metrics {
  double duration = 0.0;               // seconds
  double peak_dbfs = 0.0;
  std::optional<double> onset;         // seconds; absent for silence
  std::vector<double> rms_envelope;    // linear RMS per 100 ms hop
  BandFractions bands;
};

/// Metrics of the channel mixdown. Throws std::invalid_argument when empty.
Metrics analyze(const Signal& signal);

double to_dbfs(double amplitude) noexcept;
double rms(std::span<const double> x) noexcept;
double peak(std::span<const double> x) noexcept;

/// First index with |x| above the threshold.
std::optional<std::size_t> onset_index(std::span<const double> x,
                                       double threshold = kOnsetThreshold) noexcept;

BandFractions band_fractions(std::span<const double> x, double sample_rate = kSampleRate);

/// Fraction of spectral energy strictly below `cutoff_hz`.
double energy_fraction_below(std::span<const double> x, double cutoff_hz,
                             double sample_rate = kSampleRate);

/// Frequency of the largest bin of the power spectrum after smoothing it with
/// a moving average `smoothing_hz` wide.
double spectral_peak_hz(std::span<const double> x, double sample_rate = kSampleRate,
                        double smoothing_hz = 20.0);

/// Power-weighted mean frequency.
double spectral_centroid_hz(std::span<const double> x, double sample_rate = kSampleRate);

/// RMS over consecutive windows of `window_seconds`; the last may be partial.
std::vector<double> windowed_rms(std::span<const double> x, double window_seconds,
                                 double sample_rate = kSampleRate);

/// Schroeder backward-integrated energy decay curve in dB (0 dB at n = 0).
std::vector<double> energy_decay_db(std::span<const double> x);

/// First time at which the decay curve falls to `level_db` (negative).
std::optional<double> decay_time(std::span<const double> x, double level_db,
                                 double sample_rate = kSampleRate);

}  // namespace thunder::analysis
