#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace thunder {

inline constexpr double kSampleRate = 44100.0;

/// Small positive floor used wherever a gain must stay strictly above zero.
inline constexpr double kEpsilon = 1e-4;

/// Planar multi-channel audio buffer (1 or 2 channels) at a fixed rate.
class Signal {
 public:
  Signal() = default;
  Signal(std::size_t channels, std::size_t frames, double sample_rate = kSampleRate);

  static Signal mono(std::vector<double> samples, double sample_rate = kSampleRate);
  static Signal stereo(std::vector<double> left, std::vector<double> right,
                       double sample_rate = kSampleRate);

  std::size_t channels() const noexcept { return data_.size(); }
  std::size_t frames() const noexcept { return data_.empty() ? 0 : data_.front().size(); }
  double sample_rate() const noexcept { return sample_rate_; }
  double duration() const noexcept { return static_cast<double>(frames()) / sample_rate_; }
  bool empty() const noexcept { return frames() == 0; }

  std::span<double> channel(std::size_t c) { return data_.at(c); }
  std::span<const double> channel(std::size_t c) const { return data_.at(c); }

  /// Average of all channels.
  std::vector<double> mixdown() const;

 private:
  double sample_rate_ = kSampleRate;
  std::vector<std::vector<double>> data_;
};

namespace dsp {

/// Elementwise clamp to [lo, hi].
std::vector<double> clip(std::span<const double> in, double lo = -1.0, double hi = 1.0);
void clip_in_place(std::span<double> buf, double lo = -1.0, double hi = 1.0);

/// max(x, 0) elementwise.
std::vector<double> half_rectify(std::span<const double> in);

}  // namespace dsp
}  // namespace thunder
