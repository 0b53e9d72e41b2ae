#include "thunder/ramp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "thunder/noise.hpp"
#include "thunder/signal.hpp"

namespace thunder::dsp {

double Period::fraction(double t) const noexcept {
  if (t <= start) return 0.0;
  if (t >= end) return 1.0;
  return (t - start) / (end - start);
}

bool Period::valid() const noexcept {
  return std::isfinite(start) && std::isfinite(end) && start >= 0.0 && end > start;
}

double ramp_linear(double start, double end, const Period& period, double t) noexcept {
  if (t <= period.start) return start;
  if (t >= period.end) return end;
  return start + (end - start) * period.fraction(t);
}

UndulatingRamp::UndulatingRamp(double start, double end, Period period, std::uint64_t seed,
                               double depth)
    : start_(start), end_(end), period_(period), depth_(depth) {
  if (!period_.valid()) throw std::invalid_argument("undulating ramp: invalid period");
  if (start_ < 0.0 || end_ < 0.0) throw std::invalid_argument("undulating ramp: negative gain");
  if (depth_ < 0.0 || depth_ > 1.0) throw std::invalid_argument("undulating ramp: depth in [0, 1]");
  NoiseStream stream(seed, "undulating-ramp");
  lfo_hz_[0] = stream.uniform(kMinLfoHz, kMaxLfoHz);
  lfo_hz_[1] = stream.uniform(kMinLfoHz, kMaxLfoHz);
  blend_ = stream.uniform(0.3, 0.7);
}

double UndulatingRamp::base(double t) const noexcept {
  const double u = period_.fraction(t);
  if (start_ <= 0.0) return end_ * u;
  if (end_ > 0.0) return start_ * std::pow(end_ / start_, u);
  // Decay toward a relative floor, shifted so the curve lands on exactly 0.
  constexpr double floor = kEpsilon;
  return start_ * (std::pow(floor, u) - floor) / (1.0 - floor);
}

double UndulatingRamp::oscillation(double t) const noexcept {
  const double to_end = period_.end - std::clamp(t, period_.start, period_.end);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return blend_ * std::sin(two_pi * lfo_hz_[0] * to_end) +
         (1.0 - blend_) * std::sin(two_pi * lfo_hz_[1] * to_end);
}

double UndulatingRamp::operator()(double t) const noexcept {
  return base(t) * (1.0 + depth_ * oscillation(t));
}

double ramp_undulating(double start, double end, const Period& period, double t,
                       std::uint64_t seed, double depth) {
  return UndulatingRamp(start, end, period, seed, depth)(t);
}

double Envelope::gain_at(double t) const noexcept {
  if (t < period.start) return 0.0;
  if (t >= period.end) return end_gain;
  if (law == RampLaw::linear) return ramp_linear(start_gain, end_gain, period, t);
  return UndulatingRamp(start_gain, end_gain, period, seed, depth)(t);
}

std::vector<double> Envelope::render(std::size_t frames, double sample_rate) const {
  std::vector<double> gain(frames, 0.0);
  if (law == RampLaw::linear) {
    for (std::size_t n = 0; n < frames; ++n) gain[n] = gain_at(static_cast<double>(n) / sample_rate);
    return gain;
  }
  const UndulatingRamp ramp(start_gain, end_gain, period, seed, depth);
  for (std::size_t n = 0; n < frames; ++n) {
    const double t = static_cast<double>(n) / sample_rate;
    if (t < period.start)
      gain[n] = 0.0;
    else if (t >= period.end)
      gain[n] = end_gain;
    else
      gain[n] = ramp(t);
  }
  return gain;
}

}  // namespace thunder::dsp
