#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace thunder::dsp {

/// Closed time interval [start, end] in seconds, start >= 0, end > start.
struct Period {
  double start = 0.0;
  double end = 1.0;

  double length() const noexcept { return end - start; }
  /// Position of t inside the period in [0, 1], clamped.
  double fraction(double t) const noexcept;
  bool valid() const noexcept;
};

/// Affine interpolation from `start` at period.start to `end` at period.end.
/// t outside the period clamps to the nearest endpoint.
double ramp_linear(double start, double end, const Period& period, double t) noexcept;

/// Exponential decay from `start` to `end` modulated by a slow seeded
/// oscillation: value = base(t) * (1 + depth * s(t)), |s| <= 1.
///
/// s(t) is a blend of two sinusoids in 0.2..1.5 Hz, both phased to vanish at
/// period.end so the terminal value is exact. When `end` is zero the decay
/// runs toward kEpsilon and is offset so that it lands on zero.
class UndulatingRamp {
 public:
  static constexpr double kDefaultDepth = 0.3;
  static constexpr double kMinLfoHz = 0.2;
  static constexpr double kMaxLfoHz = 1.5;

  UndulatingRamp(double start, double end, Period period, std::uint64_t seed,
                 double depth = kDefaultDepth);

  double operator()(double t) const noexcept;

  double base(double t) const noexcept;
  double oscillation(double t) const noexcept;

  double start() const noexcept { return start_; }
  double end() const noexcept { return end_; }
  double depth() const noexcept { return depth_; }
  const Period& period() const noexcept { return period_; }
  double lfo_hz(int k) const noexcept { return lfo_hz_[k]; }

 private:
  double start_;
  double end_;
  Period period_;
  double depth_;
  double lfo_hz_[2];
  double blend_;
};

double ramp_undulating(double start, double end, const Period& period, double t,
                       std::uint64_t seed, double depth = UndulatingRamp::kDefaultDepth);

enum class RampLaw { linear, undulating };

/// Gain trajectory: 0 before the period opens, the ramp law inside it and the
/// terminal gain afterwards.
struct Envelope {
  double start_gain = 0.0;
  double end_gain = 0.0;
  Period period;
  RampLaw law = RampLaw::linear;
  std::uint64_t seed = 0;
  double depth = UndulatingRamp::kDefaultDepth;

  double gain_at(double t) const noexcept;

  /// Per-sample gain for `frames` samples starting at t = 0.
  std::vector<double> render(std::size_t frames, double sample_rate) const;
};

}  // namespace thunder::dsp
