#include "thunder/fft.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace thunder::dsp {

namespace {

/// Twiddles for every radix-2 stage of an n-point transform, laid out stage
/// after stage: the stage of length `len` occupies [len/2 - 1, len - 1) and
/// holds exp(-2 pi i k / len) for k < len/2. Each entry is computed directly
/// so rounding error does not accumulate. Cached per thread and size.
const std::vector<std::complex<double>>& twiddles(std::size_t n) {
  thread_local std::map<std::size_t, std::vector<std::complex<double>>> cache;
  auto [it, inserted] = cache.try_emplace(n);
  if (inserted) {
    auto& table = it->second;
    table.resize(n > 1 ? n - 1 : 0);
    for (std::size_t len = 2; len <= n; len <<= 1) {
      const std::size_t half = len / 2;
      for (std::size_t k = 0; k < half; ++k) {
        const double ang =
            -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len);
        table[half - 1 + k] = {std::cos(ang), std::sin(ang)};
      }
    }
  }
  return it->second;
}

void forward(std::span<std::complex<double>> data) {
  const std::size_t n = data.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  const auto& table = twiddles(n);
  auto* d = reinterpret_cast<double*>(data.data());
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    const auto* tw = reinterpret_cast<const double*>(table.data() + (half - 1));
    for (std::size_t i = 0; i < n; i += len) {
      double* lo = d + 2 * i;
      double* hi = d + 2 * (i + half);
      for (std::size_t k = 0; k < half; ++k) {
        // Plain arithmetic; std::complex operator* carries inf/nan recovery
        // that dominates the runtime.
        const double wr = tw[2 * k], wi = tw[2 * k + 1];
        const double br = hi[2 * k], bi = hi[2 * k + 1];
        const double vr = br * wr - bi * wi;
        const double vi = br * wi + bi * wr;
        const double ur = lo[2 * k], ui = lo[2 * k + 1];
        lo[2 * k] = ur + vr;
        lo[2 * k + 1] = ui + vi;
        hi[2 * k] = ur - vr;
        hi[2 * k + 1] = ui - vi;
      }
    }
  }
}

}  // namespace

std::size_t next_pow2(std::size_t n) noexcept {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft(std::span<std::complex<double>> data, bool inverse) {
  const std::size_t n = data.size();
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft: size must be a power of two");
  if (!inverse) {
    forward(data);
    return;
  }
  // ifft(x) = conj(fft(conj(x))) / n
  for (auto& x : data) x = std::conj(x);
  forward(data);
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& x : data) x = std::conj(x) * scale;
}

void multiply_spectra(std::span<std::complex<double>> acc,
                      std::span<const std::complex<double>> other) noexcept {
  for (std::size_t k = 0; k < acc.size(); ++k) {
    const auto a = acc[k];
    const auto b = other[k];
    acc[k] = {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
  }
}

std::vector<double> power_spectrum(std::span<const double> in, std::size_t* nfft_out) {
  const std::size_t nfft = next_pow2(std::max<std::size_t>(in.size(), 2));
  std::vector<std::complex<double>> buf(nfft);
  for (std::size_t i = 0; i < in.size(); ++i) buf[i] = in[i];
  fft(buf);
  std::vector<double> power(nfft / 2 + 1);
  for (std::size_t k = 0; k < power.size(); ++k) power[k] = std::norm(buf[k]);
  if (nfft_out) *nfft_out = nfft;
  return power;
}

}  // namespace thunder::dsp
