#include "thunder/signal.hpp"

#include <algorithm>
#include <stdexcept>

namespace thunder {

Signal::Signal(std::size_t channels, std::size_t frames, double sample_rate)
    : sample_rate_(sample_rate), data_(channels, std::vector<double>(frames, 0.0)) {
  if (channels < 1 || channels > 2) throw std::invalid_argument("Signal: channels must be 1 or 2");
  if (!(sample_rate > 0.0)) throw std::invalid_argument("Signal: sample rate must be positive");
}

Signal Signal::mono(std::vector<double> samples, double sample_rate) {
  Signal s(1, 0, sample_rate);
  s.data_[0] = std::move(samples);
  return s;
}

Signal Signal::stereo(std::vector<double> left, std::vector<double> right, double sample_rate) {
  if (left.size() != right.size())
    throw std::invalid_argument("Signal: stereo channels differ in length");
  Signal s(2, 0, sample_rate);
  s.data_[0] = std::move(left);
  s.data_[1] = std::move(right);
  return s;
}

std::vector<double> Signal::mixdown() const {
  std::vector<double> out(frames(), 0.0);
  if (data_.empty()) return out;
  const double scale = 1.0 / static_cast<double>(data_.size());
  for (const auto& ch : data_)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += ch[i] * scale;
  return out;
}

namespace dsp {

std::vector<double> clip(std::span<const double> in, double lo, double hi) {
  std::vector<double> out(in.begin(), in.end());
  clip_in_place(out, lo, hi);
  return out;
}

void clip_in_place(std::span<double> buf, double lo, double hi) {
  for (double& x : buf) x = std::clamp(x, lo, hi);
}

std::vector<double> half_rectify(std::span<const double> in) {
  std::vector<double> out(in.size());
  std::transform(in.begin(), in.end(), out.begin(), [](double x) { return std::max(x, 0.0); });
  return out;
}

}  // namespace dsp
}  // namespace thunder
