#pragma once

#include <span>
#include <vector>

#include "thunder/signal.hpp"

namespace thunder::dsp {

/// Unit ramp oscillator. tick() returns the current phase and then advances
/// it by f / sample_rate modulo 1.
class Phasor {
 public:
  explicit Phasor(double sample_rate = kSampleRate, double phase = 0.0)
      : sample_rate_(sample_rate), phase_(phase) {}

  double tick(double frequency) noexcept {
    const double out = phase_;
    phase_ += frequency / sample_rate_;
    if (phase_ >= 1.0) phase_ -= static_cast<double>(static_cast<long long>(phase_));
    return out;
  }

  double phase() const noexcept { return phase_; }

 private:
  double sample_rate_;
  double phase_;
};

/// Renders a phasor driven by a per-sample frequency track.
std::vector<double> phasor_run(std::span<const double> frequency, double sample_rate = kSampleRate);

/// out[n] = in[n] when trigger[n] < trigger[n-1] (a phasor wrap), otherwise
/// out[n-1]. out[0] = in[0]. Throws std::invalid_argument on length mismatch.
std::vector<double> sample_and_hold(std::span<const double> in, std::span<const double> trigger);

}  // namespace thunder::dsp
