#include "thunder/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <system_error>

#include "thunder/errors.hpp"

namespace thunder {

const char* to_string(SampleFormat format) noexcept {
  return format == SampleFormat::float32 ? "float32" : "pcm16";
}

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<std::uint8_t>& out, const char (&tag)[5]) {
  out.insert(out.end(), tag, tag + 4);
}

std::int16_t to_pcm16(double x) noexcept {
  x = std::clamp(x, -1.0, 1.0);
  const double scaled = x < 0.0 ? x * 32768.0 : x * 32767.0;
  return static_cast<std::int16_t>(std::lround(scaled));
}

std::uint16_t get_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

}  // namespace

std::vector<std::uint8_t> encode_wav(const Signal& signal, SampleFormat format) {
  const auto channels = static_cast<std::uint16_t>(std::max<std::size_t>(signal.channels(), 1));
  const auto frames = signal.frames();
  const bool is_float = format == SampleFormat::float32;
  const std::uint16_t bits = is_float ? 32 : 16;
  const std::uint16_t block_align = static_cast<std::uint16_t>(channels * bits / 8);
  const auto rate = static_cast<std::uint32_t>(std::lround(signal.sample_rate()));
  const auto data_bytes = static_cast<std::uint32_t>(frames * block_align);

  const std::uint32_t fmt_size = is_float ? 18 : 16;
  const std::uint32_t fact_bytes = is_float ? 12 : 0;
  const std::uint32_t riff_size = 4 + (8 + fmt_size) + fact_bytes + (8 + data_bytes);

  std::vector<std::uint8_t> out;
  out.reserve(riff_size + 8);
  put_tag(out, "RIFF");
  put_u32(out, riff_size);
  put_tag(out, "WAVE");

  put_tag(out, "fmt ");
  put_u32(out, fmt_size);
  put_u16(out, is_float ? kFormatFloat : kFormatPcm);
  put_u16(out, channels);
  put_u32(out, rate);
  put_u32(out, rate * block_align);
  put_u16(out, block_align);
  put_u16(out, bits);
  if (is_float) {
    put_u16(out, 0);  // cbSize
    put_tag(out, "fact");
    put_u32(out, 4);
    put_u32(out, static_cast<std::uint32_t>(frames));
  }

  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t c = 0; c < signal.channels(); ++c) {
      const double x = signal.channel(c)[n];
      if (is_float) {
        const float f = static_cast<float>(x);
        std::uint32_t bitsv;
        std::memcpy(&bitsv, &f, sizeof bitsv);
        put_u32(out, bitsv);
      } else {
        put_u16(out, static_cast<std::uint16_t>(to_pcm16(x)));
      }
    }
  }
  return out;
}

Signal decode_wav(std::span<const std::uint8_t> b) {
  if (b.size() < 12 || !tag_is(b, 0, "RIFF") || !tag_is(b, 8, "WAVE"))
    throw WavError("not a RIFF/WAVE file");

  std::uint16_t format = 0, channels = 0, bits = 0, block_align = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::span<const std::uint8_t> data;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= b.size()) {
    const std::uint32_t size = get_u32(b, pos + 4);
    const std::size_t body = pos + 8;
    if (size > b.size() - body) {
      // Tolerate a truncated trailing data chunk (common for streamed writes).
      if (!tag_is(b, pos, "data")) throw WavError("chunk extends past end of file");
    }
    const std::size_t avail = std::min<std::size_t>(size, b.size() - body);
    if (tag_is(b, pos, "fmt ")) {
      if (avail < 16) throw WavError("fmt chunk too short");
      format = get_u16(b, body);
      channels = get_u16(b, body + 2);
      rate = get_u32(b, body + 4);
      block_align = get_u16(b, body + 12);
      bits = get_u16(b, body + 14);
      if (format == kFormatExtensible) {
        if (avail < 26) throw WavError("extensible fmt chunk too short");
        format = get_u16(b, body + 24);
      }
      have_fmt = true;
    } else if (tag_is(b, pos, "data")) {
      data = b.subspan(body, avail);
      have_data = true;
    }
    pos = body + avail + (avail & 1);
  }

  if (!have_fmt) throw WavError("missing fmt chunk");
  if (!have_data) throw WavError("missing data chunk");
  if (channels < 1 || channels > 2)
    throw WavError("unsupported channel count " + std::to_string(channels));
  if (rate == 0) throw WavError("sample rate is zero");
  const bool pcm = format == kFormatPcm && (bits == 16 || bits == 24 || bits == 32);
  const bool flt = format == kFormatFloat && (bits == 32 || bits == 64);
  if (!pcm && !flt)
    throw WavError("unsupported sample format " + std::to_string(format) + " with " +
                   std::to_string(bits) + " bits");
  const std::size_t bytes_per_sample = bits / 8;
  if (block_align != channels * bytes_per_sample) throw WavError("inconsistent block alignment");

  const std::size_t frames = data.size() / block_align;
  Signal out(channels, frames, static_cast<double>(rate));
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t c = 0; c < channels; ++c) {
      const std::size_t at = n * block_align + c * bytes_per_sample;
      double v = 0.0;
      if (flt && bits == 32) {
        const std::uint32_t raw = get_u32(data, at);
        float f;
        std::memcpy(&f, &raw, sizeof f);
        v = f;
      } else if (flt) {
        std::uint64_t raw = static_cast<std::uint64_t>(get_u32(data, at)) |
                            (static_cast<std::uint64_t>(get_u32(data, at + 4)) << 32);
        std::memcpy(&v, &raw, sizeof v);
      } else if (bits == 16) {
        const auto s = static_cast<std::int16_t>(get_u16(data, at));
        v = s < 0 ? s / 32768.0 : s / 32767.0;
      } else if (bits == 24) {
        std::int32_t s = data[at] | (data[at + 1] << 8) | (data[at + 2] << 16);
        if (s & 0x800000) s -= 0x1000000;
        v = s / 8388608.0;
      } else {
        const auto s = static_cast<std::int32_t>(get_u32(data, at));
        v = s / 2147483648.0;
      }
      out.channel(c)[n] = v;
    }
  }
  return out;
}

void write_wav(const Signal& signal, const std::filesystem::path& path, SampleFormat format) {
  const auto bytes = encode_wav(signal, format);
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::random_device rd;
  const auto tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(rd()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    f.flush();
    if (!f) {
      f.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot move output into place at " + path.string());
  }
}

Signal read_wav(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw WavError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  try {
    return decode_wav(bytes);
  } catch (const WavError& e) {
    throw WavError(path.string() + ": " + e.what());
  }
}

}  // namespace thunder
