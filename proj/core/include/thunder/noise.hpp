#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace thunder::dsp {

/// 64-bit FNV-1a, used to turn stream names into stream keys.
constexpr std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: the k-th value of a stream is a pure function of
/// (seed, stream name, k). Streams with different names are independent, so
/// sub-models can draw in any order (or in parallel) without perturbing each
/// other.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::string_view name) noexcept
      : key_(mix64(seed ^ mix64(fnv1a(name)))) {}
  explicit NoiseStream(std::uint64_t seed) noexcept : NoiseStream(seed, "default") {}

  std::uint64_t at(std::uint64_t counter) const noexcept {
    return mix64(key_ + (counter + 1) * 0x9e3779b97f4a7c15ULL);
  }

  std::uint64_t next_u64() noexcept { return at(counter_++); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double next_unit() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  double next_open_unit() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * next_unit(); }

  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) noexcept {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(static_cast<double>(span) * next_unit());
  }

  /// Uniform on [-1, 1).
  double next_bipolar() noexcept { return 2.0 * next_unit() - 1.0; }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// n i.i.d. samples uniform on [-1, 1).
std::vector<double> white_noise(std::uint64_t seed, std::size_t n);
std::vector<double> white_noise(NoiseStream& stream, std::size_t n);

}  // namespace thunder::dsp
