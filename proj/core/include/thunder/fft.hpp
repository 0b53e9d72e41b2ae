#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace thunder::dsp {

/// Smallest power of two >= n (n == 0 yields 1).
std::size_t next_pow2(std::size_t n) noexcept;

/// In-place iterative radix-2 FFT. data.size() must be a power of two.
void fft(std::span<std::complex<double>> data, bool inverse = false);

/// acc[k] *= other[k].
void multiply_spectra(std::span<std::complex<double>> acc,
                      std::span<const std::complex<double>> other) noexcept;

/// One-sided power spectrum |X[k]|^2 for k in [0, nfft/2], zero-padded to a
/// power of two.
std::vector<double> power_spectrum(std::span<const double> in, std::size_t* nfft_out = nullptr);

}  // namespace thunder::dsp
