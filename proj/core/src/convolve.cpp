#include "thunder/convolve.hpp"

#include <algorithm>
#include <complex>
#include <stdexcept>

#include "thunder/fft.hpp"

namespace thunder::dsp {

namespace {

using cplx = std::complex<double>;

void require_non_empty(std::size_t a, std::size_t b) {
  if (a == 0 || b == 0) throw std::invalid_argument("convolve: inputs must be non-empty");
}

/// Uniformly partitioned overlap-add. The kernel is cut into blocks of B
/// samples whose 2B-point spectra are kept; each 2B-point input block spectrum
/// is multiplied against every kernel partition and accumulated into the
/// output block it lands on. Transform sizes stay cache-sized regardless of
/// signal length.
std::vector<cplx> partitioned_convolve(std::span<const cplx> signal, std::span<const cplx> kernel) {
  const std::size_t out_len = signal.size() + kernel.size() - 1;
  const std::size_t block = std::clamp<std::size_t>(next_pow2(kernel.size()), 16, 16384);
  const std::size_t nfft = 2 * block;
  const std::size_t partitions = (kernel.size() + block - 1) / block;
  const std::size_t in_blocks = (signal.size() + block - 1) / block;
  const std::size_t out_blocks = in_blocks + partitions;

  std::vector<std::vector<cplx>> kernel_spectra(partitions, std::vector<cplx>(nfft));
  for (std::size_t p = 0; p < partitions; ++p) {
    const std::size_t at = p * block;
    const std::size_t len = std::min(block, kernel.size() - at);
    std::copy_n(kernel.begin() + static_cast<std::ptrdiff_t>(at), len, kernel_spectra[p].begin());
    fft(kernel_spectra[p]);
  }

  std::vector<std::vector<cplx>> input_spectra(in_blocks, std::vector<cplx>(nfft));
  for (std::size_t j = 0; j < in_blocks; ++j) {
    const std::size_t at = j * block;
    const std::size_t len = std::min(block, signal.size() - at);
    std::copy_n(signal.begin() + static_cast<std::ptrdiff_t>(at), len, input_spectra[j].begin());
    fft(input_spectra[j]);
  }

  std::vector<cplx> out(out_len);
  std::vector<cplx> acc(nfft), term(nfft);
  for (std::size_t j = 0; j < out_blocks; ++j) {
    std::fill(acc.begin(), acc.end(), cplx{});
    bool any = false;
    for (std::size_t p = 0; p < partitions; ++p) {
      if (p > j || j - p >= in_blocks) continue;
      const auto& x = input_spectra[j - p];
      const auto& h = kernel_spectra[p];
      for (std::size_t k = 0; k < nfft; ++k) {
        acc[k] += cplx(x[k].real() * h[k].real() - x[k].imag() * h[k].imag(),
                       x[k].real() * h[k].imag() + x[k].imag() * h[k].real());
      }
      any = true;
    }
    if (!any) continue;
    fft(acc, true);
    const std::size_t at = j * block;
    for (std::size_t i = 0; i < nfft && at + i < out_len; ++i) out[at + i] += acc[i];
  }
  return out;
}

std::vector<cplx> convolve_complex(std::span<const cplx> a, std::span<const cplx> b) {
  return a.size() >= b.size() ? partitioned_convolve(a, b) : partitioned_convolve(b, a);
}

std::vector<cplx> to_complex(std::span<const double> x) {
  return std::vector<cplx>(x.begin(), x.end());
}

}  // namespace

std::vector<double> convolve_direct(std::span<const double> in, std::span<const double> ir) {
  require_non_empty(in.size(), ir.size());
  std::vector<double> out(in.size() + ir.size() - 1, 0.0);
  for (std::size_t i = 0; i < in.size(); ++i) {
    const double x = in[i];
    if (x == 0.0) continue;
    for (std::size_t k = 0; k < ir.size(); ++k) out[i + k] += x * ir[k];
  }
  return out;
}

std::vector<double> convolve_fft(std::span<const double> in, std::span<const double> ir) {
  require_non_empty(in.size(), ir.size());
  const auto y = convolve_complex(to_complex(in), to_complex(ir));
  std::vector<double> out(y.size());
  std::transform(y.begin(), y.end(), out.begin(), [](const cplx& v) { return v.real(); });
  return out;
}

std::array<std::vector<double>, 2> convolve_fft_pair(std::span<const double> in,
                                                     std::span<const double> ir_a,
                                                     std::span<const double> ir_b) {
  require_non_empty(in.size(), ir_a.size());
  if (ir_a.size() != ir_b.size())
    throw std::invalid_argument("convolve: paired kernels differ in length");
  // A real input against the complex kernel a + i b yields y_a + i y_b.
  std::vector<cplx> kernel(ir_a.size());
  for (std::size_t i = 0; i < kernel.size(); ++i) kernel[i] = {ir_a[i], ir_b[i]};
  const auto y = convolve_complex(to_complex(in), kernel);

  std::array<std::vector<double>, 2> out{std::vector<double>(y.size()), std::vector<double>(y.size())};
  for (std::size_t i = 0; i < y.size(); ++i) {
    out[0][i] = y[i].real();
    out[1][i] = y[i].imag();
  }
  return out;
}

std::vector<double> convolve(std::span<const double> in, std::span<const double> ir) {
  require_non_empty(in.size(), ir.size());
  if (std::min(in.size(), ir.size()) <= 32) return convolve_direct(in, ir);
  return convolve_fft(in, ir);
}

}  // namespace thunder::dsp
