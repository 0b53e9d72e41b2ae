#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "thunder/signal.hpp"

namespace thunder {

enum class SampleFormat { float32, pcm16 };

const char* to_string(SampleFormat format) noexcept;

std::vector<std::uint8_t> encode_wav(const Signal& signal, SampleFormat format);

/// Accepts PCM 16/24/32-bit and IEEE float 32/64-bit, including
/// WAVE_FORMAT_EXTENSIBLE. Throws WavError describing what is wrong.
Signal decode_wav(std::span<const std::uint8_t> bytes);

/// Writes through a temporary file in the same directory and renames it into
/// place, so readers never observe a partial file. Throws std::runtime_error
/// on I/O failure.
void write_wav(const Signal& signal, const std::filesystem::path& path, SampleFormat format);

Signal read_wav(const std::filesystem::path& path);

}  // namespace thunder
