#include "thunder/phasor.hpp"

#include <stdexcept>

namespace thunder::dsp {

std::vector<double> phasor_run(std::span<const double> frequency, double sample_rate) {
  Phasor ph(sample_rate);
  std::vector<double> out(frequency.size());
  for (std::size_t i = 0; i < frequency.size(); ++i) out[i] = ph.tick(frequency[i]);
  return out;
}

std::vector<double> sample_and_hold(std::span<const double> in, std::span<const double> trigger) {
  if (in.size() != trigger.size())
    throw std::invalid_argument("sample_and_hold: input and trigger lengths differ");
  std::vector<double> out(in.size());
  if (in.empty()) return out;
  out[0] = in[0];
  for (std::size_t n = 1; n < in.size(); ++n)
    out[n] = trigger[n] < trigger[n - 1] ? in[n] : out[n - 1];
  return out;
}

}  // namespace thunder::dsp
