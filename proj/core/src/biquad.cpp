#include "thunder/biquad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace thunder::dsp {

const char* to_string(FilterKind kind) noexcept {
  switch (kind) {
    case FilterKind::lowpass: return "lowpass";
    case FilterKind::highpass: return "highpass";
    case FilterKind::bandpass: return "bandpass";
  }
  return "unknown";
}

BiquadCoefficients design_biquad(const BiquadSpec& spec, double sample_rate) {
  const double nyquist = 0.5 * sample_rate;
  if (!(spec.frequency > 0.0 && spec.frequency < nyquist))
    throw std::invalid_argument("biquad: frequency " + std::to_string(spec.frequency) +
                                " Hz outside (0, " + std::to_string(nyquist) + ")");
  if (!(spec.q > 0.0) || !std::isfinite(spec.q))
    throw std::invalid_argument("biquad: Q must be positive");

  const double k = std::tan(std::numbers::pi * spec.frequency / sample_rate);
  const double kk = k * k;
  const double norm = 1.0 / (1.0 + k / spec.q + kk);

  BiquadCoefficients c;
  c.a1 = 2.0 * (kk - 1.0) * norm;
  c.a2 = (1.0 - k / spec.q + kk) * norm;
  switch (spec.kind) {
    case FilterKind::lowpass:
      c.b0 = kk * norm;
      c.b1 = 2.0 * c.b0;
      c.b2 = c.b0;
      break;
    case FilterKind::highpass:
      c.b0 = norm;
      c.b1 = -2.0 * c.b0;
      c.b2 = c.b0;
      break;
    case FilterKind::bandpass:
      c.b0 = k / spec.q * norm;
      c.b1 = 0.0;
      c.b2 = -c.b0;
      break;
  }
  return c;
}

std::vector<double> biquad_process(const BiquadSpec& spec, std::span<const double> in,
                                   double sample_rate) {
  Biquad section(design_biquad(spec, sample_rate));
  std::vector<double> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = section.process(in[i]);
  return out;
}

double CutoffRamp::cutoff_at(double t) const noexcept {
  return std::max(ramp_linear(f_start, f_end, period, t), kCutoffFloorHz);
}

RampedBiquad::RampedBiquad(FilterKind kind, double q, CutoffRamp ramp, double sample_rate)
    : kind_(kind), q_(q), ramp_(ramp), sample_rate_(sample_rate) {
  if (!(ramp_.f_start >= 0.0 && ramp_.f_end >= 0.0))
    throw std::invalid_argument("biquad ramp: cutoffs must be non-negative");
  if (!ramp_.period.valid()) throw std::invalid_argument("biquad ramp: invalid period");
  // Validates Q and the upper frequency bound up front.
  design_biquad({kind_, std::max(ramp_.f_start, kCutoffFloorHz), q_}, sample_rate_);
  design_biquad({kind_, std::max(ramp_.f_end, kCutoffFloorHz), q_}, sample_rate_);
}

double RampedBiquad::effective_cutoff(double t) const noexcept {
  const double block_seconds = static_cast<double>(kControlBlock) / sample_rate_;
  const double block_start =
      origin_ + std::floor((t - origin_) / block_seconds) * block_seconds;
  return ramp_.cutoff_at(block_start);
}

std::vector<double> RampedBiquad::process(std::span<const double> in, double t0) {
  origin_ = t0;
  std::vector<double> out(in.size());
  const bool constant = ramp_.f_start == ramp_.f_end;
  double designed = -1.0;
  for (std::size_t block = 0; block < in.size(); block += kControlBlock) {
    const double t = t0 + static_cast<double>(block) / sample_rate_;
    const double f = ramp_.cutoff_at(t);
    if (f != designed) {
      section_.set_coefficients(design_biquad({kind_, f, q_}, sample_rate_));
      designed = f;
    }
    const std::size_t stop = std::min(in.size(), block + kControlBlock);
    for (std::size_t i = block; i < stop; ++i) out[i] = section_.process(in[i]);
    if (constant && block == 0) {
      for (std::size_t i = stop; i < in.size(); ++i) out[i] = section_.process(in[i]);
      break;
    }
  }
  return out;
}

std::vector<double> biquad_ramp_cutoff(const BiquadSpec& spec, double f_start, double f_end,
                                       const Period& period, std::span<const double> in,
                                       double t0, double sample_rate) {
  RampedBiquad filter(spec.kind, spec.q, {f_start, f_end, period}, sample_rate);
  return filter.process(in, t0);
}

}  // namespace thunder::dsp
