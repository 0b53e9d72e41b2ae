#pragma once

#include <array>
#include <span>
#include <vector>

namespace thunder::dsp {

/// Linear convolution, length in.size() + ir.size() - 1. Picks the direct sum
/// for short kernels and FFT otherwise. Throws on empty inputs.
std::vector<double> convolve(std::span<const double> in, std::span<const double> ir);

std::vector<double> convolve_direct(std::span<const double> in, std::span<const double> ir);
std::vector<double> convolve_fft(std::span<const double> in, std::span<const double> ir);

/// Convolves one real input with two kernels at once (one complex transform
/// carrying both). Kernels must have equal length.
std::array<std::vector<double>, 2> convolve_fft_pair(std::span<const double> in,
                                                     std::span<const double> ir_a,
                                                     std::span<const double> ir_b);

}  // namespace thunder::dsp
