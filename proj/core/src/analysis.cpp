#include "thunder/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "thunder/fft.hpp"

namespace thunder::analysis {

double to_dbfs(double amplitude) noexcept {
  if (amplitude <= 0.0) return -std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(amplitude);
}

double rms(std::span<const double> x) noexcept {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

double peak(std::span<const double> x) noexcept {
  double p = 0.0;
  for (double v : x) p = std::max(p, std::abs(v));
  return p;
}

std::optional<std::size_t> onset_index(std::span<const double> x, double threshold) noexcept {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::abs(x[i]) > threshold) return i;
  return std::nullopt;
}

namespace {

double bin_hz(std::size_t k, std::size_t nfft, double sample_rate) {
  return static_cast<double>(k) * sample_rate / static_cast<double>(nfft);
}

}  // namespace

BandFractions band_fractions(std::span<const double> x, double sample_rate) {
  std::size_t nfft = 0;
  const auto power = dsp::power_spectrum(x, &nfft);
  double low = 0.0, mid = 0.0, high = 0.0;
  for (std::size_t k = 0; k < power.size(); ++k) {
    const double f = bin_hz(k, nfft, sample_rate);
    (f < kLowBandHz ? low : f <= kMidBandHz ? mid : high) += power[k];
  }
  const double total = low + mid + high;
  if (total <= 0.0) return {};
  return {low / total, mid / total, high / total};
}

double energy_fraction_below(std::span<const double> x, double cutoff_hz, double sample_rate) {
  std::size_t nfft = 0;
  const auto power = dsp::power_spectrum(x, &nfft);
  double below = 0.0, total = 0.0;
  for (std::size_t k = 0; k < power.size(); ++k) {
    total += power[k];
    if (bin_hz(k, nfft, sample_rate) < cutoff_hz) below += power[k];
  }
  return total > 0.0 ? below / total : 0.0;
}

double spectral_peak_hz(std::span<const double> x, double sample_rate, double smoothing_hz) {
  std::size_t nfft = 0;
  const auto power = dsp::power_spectrum(x, &nfft);
  const double df = sample_rate / static_cast<double>(nfft);
  const auto half = static_cast<std::size_t>(std::max(0.0, std::round(0.5 * smoothing_hz / df)));

  std::vector<double> prefix(power.size() + 1, 0.0);
  std::partial_sum(power.begin(), power.end(), prefix.begin() + 1);
  std::size_t best = 0;
  double best_val = -1.0;
  for (std::size_t k = 1; k < power.size(); ++k) {
    const std::size_t lo = k > half ? k - half : 0;
    const std::size_t hi = std::min(power.size(), k + half + 1);
    const double avg = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
    if (avg > best_val) {
      best_val = avg;
      best = k;
    }
  }
  return bin_hz(best, nfft, sample_rate);
}

double spectral_centroid_hz(std::span<const double> x, double sample_rate) {
  std::size_t nfft = 0;
  const auto power = dsp::power_spectrum(x, &nfft);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < power.size(); ++k) {
    num += bin_hz(k, nfft, sample_rate) * power[k];
    den += power[k];
  }
  return den > 0.0 ? num / den : 0.0;
}

std::vector<double> windowed_rms(std::span<const double> x, double window_seconds,
                                 double sample_rate) {
  const auto window = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(window_seconds * sample_rate)));
  std::vector<double> out;
  for (std::size_t at = 0; at < x.size(); at += window)
    out.push_back(rms(x.subspan(at, std::min(window, x.size() - at))));
  return out;
}

std::vector<double> energy_decay_db(std::span<const double> x) {
  std::vector<double> edc(x.size());
  double acc = 0.0;
  for (std::size_t i = x.size(); i-- > 0;) {
    acc += x[i] * x[i];
    edc[i] = acc;
  }
  const double total = edc.empty() ? 0.0 : edc.front();
  for (double& e : edc) e = total > 0.0 ? 10.0 * std::log10(std::max(e / total, 1e-300)) : -300.0;
  return edc;
}

std::optional<double> decay_time(std::span<const double> x, double level_db, double sample_rate) {
  const auto edc = energy_decay_db(x);
  for (std::size_t i = 0; i < edc.size(); ++i)
    if (edc[i] <= level_db) return static_cast<double>(i) / sample_rate;
  return std::nullopt;
}

Metrics analyze(const Signal& signal) {
  if (signal.empty()) throw std::invalid_argument("analyze: empty signal");
  const auto mono = signal.mixdown();
  const double fs = signal.sample_rate();

  Metrics m;
  m.duration = signal.duration();
  double p = 0.0;
  std::optional<std::size_t> first;
  for (std::size_t c = 0; c < signal.channels(); ++c) {
    const auto ch = signal.channel(c);
    p = std::max(p, peak(ch));
    const auto idx = onset_index(ch);
    if (idx && (!first || *idx < *first)) first = idx;
  }
  m.peak_dbfs = to_dbfs(p);
  if (first) m.onset = static_cast<double>(*first) / fs;
  m.rms_envelope = windowed_rms(mono, kHopSeconds, fs);
  m.bands = band_fractions(mono, fs);
  return m;
}

}  // namespace thunder::analysis
