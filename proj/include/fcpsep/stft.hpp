// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FCPSEP_STFT_HPP_
#define FCPSEP_STFT_HPP_

#include "fcpsep/core.hpp"

#include <cstddef>

namespace fcpsep
{

enum class WindowKind
{
  SqrtHann,
  Hann,
  Rectangular,
};

/// STFT geometry. Defaults: 8 kHz, 32 ms square-root Hann window, 8 ms hop,
/// 256-point DFT, which gives 129 frequency bins.
struct StftConfig
{
  int sample_rate = 8000;
  int win_len = 256;
  int hop = 64;
  int fft_size = 256;
  WindowKind window = WindowKind::SqrtHann;

  int bins() const { return fft_size / 2 + 1; }
  /// Zeros prepended before the first frame so that the first sample is
  /// covered by win_len / hop frames.
  int head_pad() const { return win_len - hop; }

  /// Throws ConfigError on non-positive sizes, hop not dividing win_len or
  /// fft_size < win_len.
  void validate() const;
};

/// Number of frames produced for a signal of `num_samples` samples.
int num_frames(std::size_t num_samples, const StftConfig & cfg);

/// Number of samples an istft of `frames` frames can reproduce.
std::size_t max_output_length(int frames, const StftConfig & cfg);

Eigen::VectorXd analysis_window(const StftConfig & cfg);

/// Analysis window divided by the overlap-add sum of squared analysis
/// windows, so that analysis followed by synthesis is the identity.
Eigen::VectorXd synthesis_window(const StftConfig & cfg);

/// Forward STFT. Rows index frames, columns index bins.
Spectrogram stft(const Eigen::Ref<const Signal> & audio, const StftConfig & cfg = {});

/// Weighted overlap-add inverse of `stft`; returns exactly `out_len` samples.
Signal istft(const Spectrogram & spec, const StftConfig & cfg, std::size_t out_len);

MultiSpectrogram stft_all(const MultiSignal & audio, const StftConfig & cfg = {});
MultiSignal istft_all(const MultiSpectrogram & specs, const StftConfig & cfg, std::size_t out_len);

}  // namespace fcpsep

#endif  // FCPSEP_STFT_HPP_
