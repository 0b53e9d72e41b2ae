#include "thunder/noise.hpp"

namespace thunder::dsp {

std::vector<double> white_noise(std::uint64_t seed, std::size_t n) {
  NoiseStream stream(seed);
  return white_noise(stream, n);
}

std::vector<double> white_noise(NoiseStream& stream, std::size_t n) {
  std::vector<double> out(n);
  for (double& x : out) x = stream.next_bipolar();
  return out;
}

}  // namespace thunder::dsp
