// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fcpsep/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace fcpsep
{

namespace
{

static_assert(std::endian::native == std::endian::little, "WAV I/O assumes a little-endian host");

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

template<typename T>
T read_le(const char * p)
{
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

template<typename T>
void put_le(std::string & buf, T v)
{
  char raw[sizeof(T)];
  std::memcpy(raw, &v, sizeof(T));
  buf.append(raw, sizeof(T));
}

}  // namespace

WavData read_wav(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("wav: cannot open " + path.string());
  }
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || bytes.compare(0, 4, "RIFF") != 0 || bytes.compare(8, 4, "WAVE") != 0) {
    throw IoError("wav: not a RIFF/WAVE file: " + path.string());
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const char * data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string id = bytes.substr(pos, 4);
    const auto size = read_le<std::uint32_t>(bytes.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) {
      throw IoError("wav: truncated chunk '" + id + "' in " + path.string());
    }
    if (id == "fmt ") {
      if (size < 16) {
        throw IoError("wav: short fmt chunk in " + path.string());
      }
      format = read_le<std::uint16_t>(bytes.data() + body);
      channels = read_le<std::uint16_t>(bytes.data() + body + 2);
      rate = read_le<std::uint32_t>(bytes.data() + body + 4);
      bits = read_le<std::uint16_t>(bytes.data() + body + 14);
      if (format == kFormatExtensible && size >= 26) {
        format = read_le<std::uint16_t>(bytes.data() + body + 24);
      }
    } else if (id == "data") {
      data = bytes.data() + body;
      data_size = size;
    }
    pos = body + size + (size & 1u);
  }

  if (channels == 0 || data == nullptr) {
    throw IoError("wav: missing fmt or data chunk in " + path.string());
  }
  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool f32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !f32) {
    throw IoError("wav: unsupported sample format in " + path.string());
  }

  const std::size_t width = bits / 8;
  const std::size_t frames = data_size / (width * channels);
  WavData out;
  out.sample_rate = static_cast<int>(rate);
  out.channels.assign(channels, Signal::Zero(static_cast<Eigen::Index>(frames)));
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t ch = 0; ch < channels; ++ch) {
      const char * p = data + (n * channels + ch) * width;
      out.channels[ch](static_cast<Eigen::Index>(n)) =
        pcm16 ? read_le<std::int16_t>(p) / 32768.0 : static_cast<double>(read_le<float>(p));
    }
  }
  return out;
}

void write_wav(const std::filesystem::path & path, const WavData & data, SampleFormat format)
{
  require(!data.channels.empty(), "wav: no channels to write");
  const auto frames = static_cast<std::size_t>(data.channels.front().size());
  for (const auto & ch : data.channels) {
    require<GeometryError>(
      static_cast<std::size_t>(ch.size()) == frames, "wav: channels differ in length");
  }

  const auto channels = static_cast<std::uint16_t>(data.channels.size());
  const std::uint16_t bits = format == SampleFormat::Pcm16 ? 16 : 32;
  const std::uint16_t block = static_cast<std::uint16_t>(channels * bits / 8);
  const auto data_size = static_cast<std::uint32_t>(frames * block);

  std::string buf;
  buf.reserve(44 + data_size);
  buf += "RIFF";
  put_le<std::uint32_t>(buf, 36 + data_size);
  buf += "WAVEfmt ";
  put_le<std::uint32_t>(buf, 16);
  put_le<std::uint16_t>(buf, format == SampleFormat::Pcm16 ? kFormatPcm : kFormatFloat);
  put_le<std::uint16_t>(buf, channels);
  put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(data.sample_rate));
  put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(data.sample_rate) * block);
  put_le<std::uint16_t>(buf, block);
  put_le<std::uint16_t>(buf, bits);
  buf += "data";
  put_le<std::uint32_t>(buf, data_size);

  for (std::size_t n = 0; n < frames; ++n) {
    for (const auto & ch : data.channels) {
      const double v = ch(static_cast<Eigen::Index>(n));
      if (format == SampleFormat::Pcm16) {
        const double scaled = std::round(std::clamp(v, -1.0, 1.0) * 32767.0);
        put_le<std::int16_t>(buf, static_cast<std::int16_t>(scaled));
      } else {
        put_le<float>(buf, static_cast<float>(v));
      }
    }
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("wav: cannot create " + path.string());
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) {
    throw IoError("wav: write failed for " + path.string());
  }
}

}  // namespace fcpsep
