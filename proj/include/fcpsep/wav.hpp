// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FCPSEP_WAV_HPP_
#define FCPSEP_WAV_HPP_

#include "fcpsep/core.hpp"

#include <filesystem>

namespace fcpsep
{

enum class SampleFormat
{
  Pcm16,
  Float32,
};

struct WavData
{
  int sample_rate = 8000;
  MultiSignal channels;  // one Signal per channel, equal lengths
};

/// Reads RIFF/WAVE files holding 16-bit PCM or 32-bit IEEE float samples
/// (including WAVE_FORMAT_EXTENSIBLE wrappers). PCM is scaled to [-1, 1).
WavData read_wav(const std::filesystem::path & path);

/// Writes all channels interleaved. PCM16 output is clipped to [-1, 1].
void write_wav(
  const std::filesystem::path & path, const WavData & data,
  SampleFormat format = SampleFormat::Float32);

}  // namespace fcpsep

#endif  // FCPSEP_WAV_HPP_
