#include "thunder/postfx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thunder::fx {

void validate(const CompressorSpec& spec) {
  if (!(spec.ratio >= 1.0)) throw std::invalid_argument("compressor: ratio must be >= 1");
  if (!(spec.knee >= 0.0)) throw std::invalid_argument("compressor: knee must be >= 0");
  if (!(spec.attack >= 0.0 && spec.release >= 0.0))
    throw std::invalid_argument("compressor: attack and release must be >= 0");
}

double compressor_curve_db(double x, const CompressorSpec& spec) noexcept {
  const double over = x - spec.threshold;
  const double half_knee = 0.5 * spec.knee;
  if (over <= -half_knee) return x;
  if (over >= half_knee) return spec.threshold + over / spec.ratio;
  const double u = over + half_knee;
  return x + (1.0 / spec.ratio - 1.0) * u * u / (2.0 * spec.knee);
}

namespace {

constexpr double kSilenceDb = -240.0;
constexpr double kDbToLog = 0.11512925464970228;  // ln(10) / 20

double level_db(double amplitude) noexcept {
  return amplitude > 0.0 ? std::max(20.0 * std::log10(amplitude), kSilenceDb) : kSilenceDb;
}

double smoothing_coefficient(double seconds, double sample_rate) noexcept {
  return seconds > 0.0 ? std::exp(-1.0 / (seconds * sample_rate)) : 0.0;
}

/// Linear gain to apply at each frame given the per-frame detector level.
std::vector<double> gain_track(std::span<const double> detector, const CompressorSpec& spec,
                               double sample_rate) {
  const double attack = smoothing_coefficient(spec.attack, sample_rate);
  const double release = smoothing_coefficient(spec.release, sample_rate);
  const double knee_floor = std::pow(10.0, (spec.threshold - 0.5 * spec.knee) / 20.0);
  std::vector<double> gain(detector.size(), 1.0);
  double smoothed = 0.0;
  for (std::size_t n = 0; n < detector.size(); ++n) {
    // Below threshold - knee/2 the curve is the identity, so skip the log.
    const bool linear = detector[n] < knee_floor;
    const double x = linear ? 0.0 : level_db(detector[n]);
    const double target = linear ? 0.0 : compressor_curve_db(x, spec) - x;
    const double coeff = target < smoothed ? attack : release;
    smoothed = coeff * smoothed + (1.0 - coeff) * target;
    if (smoothed != 0.0) gain[n] = std::exp(smoothed * kDbToLog);
  }
  return gain;
}

}  // namespace

std::vector<double> compress(std::span<const double> in, const CompressorSpec& spec,
                             double sample_rate) {
  validate(spec);
  std::vector<double> detector(in.size());
  std::transform(in.begin(), in.end(), detector.begin(), [](double v) { return std::abs(v); });
  const auto gain = gain_track(detector, spec, sample_rate);
  std::vector<double> out(in.size());
  for (std::size_t n = 0; n < in.size(); ++n) out[n] = in[n] * gain[n];
  return out;
}

Signal compress(const Signal& in, const CompressorSpec& spec) {
  validate(spec);
  std::vector<double> detector(in.frames(), 0.0);
  for (std::size_t c = 0; c < in.channels(); ++c) {
    const auto ch = in.channel(c);
    for (std::size_t n = 0; n < ch.size(); ++n) detector[n] = std::max(detector[n], std::abs(ch[n]));
  }
  const auto gain = gain_track(detector, spec, in.sample_rate());
  Signal out(in.channels(), in.frames(), in.sample_rate());
  for (std::size_t c = 0; c < in.channels(); ++c) {
    const auto src = in.channel(c);
    auto dst = out.channel(c);
    for (std::size_t n = 0; n < src.size(); ++n) dst[n] = src[n] * gain[n];
  }
  return out;
}

}  // namespace thunder::fx
