#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "thunder/ramp.hpp"
#include "thunder/signal.hpp"

namespace thunder::dsp {

enum class FilterKind { lowpass, highpass, bandpass };

const char* to_string(FilterKind kind) noexcept;

/// Time-varying cutoffs are never designed below this frequency.
inline constexpr double kCutoffFloorHz = 5.0;

/// Coefficients are recomputed once per block of this many samples.
inline constexpr std::size_t kControlBlock = 64;

inline constexpr double kButterworthQ = 0.70710678118654752;

struct BiquadSpec {
  FilterKind kind = FilterKind::lowpass;
  double frequency = 1000.0;  // Hz: cutoff (LP/HP) or center (BP)
  double q = kButterworthQ;
};

/// Normalized (a0 == 1) second-order section.
struct BiquadCoefficients {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

/// Bilinear-transform design of the analog prototypes
///   LP: 1 / (s^2 + s/Q + 1)        unity DC gain
///   HP: s^2 / (s^2 + s/Q + 1)      unity gain toward Nyquist
///   BP: (s/Q) / (s^2 + s/Q + 1)    0 dB peak at the center frequency
/// with the center pre-warped. Throws std::invalid_argument unless
/// 0 < frequency < sample_rate/2 and q > 0.
BiquadCoefficients design_biquad(const BiquadSpec& spec, double sample_rate = kSampleRate);

/// Direct form I section. Keeps input/output history across coefficient
/// changes, which behaves well when cutoffs are swept.
class Biquad {
 public:
  Biquad() = default;
  explicit Biquad(const BiquadCoefficients& c) : c_(c) {}

  void set_coefficients(const BiquadCoefficients& c) noexcept { c_ = c; }
  const BiquadCoefficients& coefficients() const noexcept { return c_; }
  void reset() noexcept { x1_ = x2_ = y1_ = y2_ = 0.0; }

  double process(double x) noexcept {
    const double y = c_.b0 * x + c_.b1 * x1_ + c_.b2 * x2_ - c_.a1 * y1_ - c_.a2 * y2_;
    x2_ = x1_;
    x1_ = x;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

 private:
  BiquadCoefficients c_;
  double x1_ = 0.0, x2_ = 0.0, y1_ = 0.0, y2_ = 0.0;
};

/// Static filtering of a buffer with fresh state.
std::vector<double> biquad_process(const BiquadSpec& spec, std::span<const double> in,
                                   double sample_rate = kSampleRate);

/// Linear cutoff sweep from f_start to f_end across `period`, held at the
/// endpoints outside it. Targets below kCutoffFloorHz are clamped to the floor.
struct CutoffRamp {
  double f_start = 1000.0;
  double f_end = 1000.0;
  Period period;

  double cutoff_at(double t) const noexcept;
};

/// A biquad whose cutoff follows a CutoffRamp, redesigned every kControlBlock
/// samples at the block's start time.
class RampedBiquad {
 public:
  RampedBiquad(FilterKind kind, double q, CutoffRamp ramp, double sample_rate = kSampleRate);

  /// Filters `in`, whose first sample sits at time `t0` seconds.
  std::vector<double> process(std::span<const double> in, double t0 = 0.0);

  /// Cutoff in effect for the block that contains time t. Blocks are laid
  /// out from the `t0` of the most recent process() call.
  double effective_cutoff(double t) const noexcept;

  const CutoffRamp& ramp() const noexcept { return ramp_; }

 private:
  FilterKind kind_;
  double q_;
  CutoffRamp ramp_;
  double sample_rate_;
  Biquad section_;
  double origin_ = 0.0;
};

std::vector<double> biquad_ramp_cutoff(const BiquadSpec& spec, double f_start, double f_end,
                                       const Period& period, std::span<const double> in,
                                       double t0 = 0.0, double sample_rate = kSampleRate);

}  // namespace thunder::dsp
