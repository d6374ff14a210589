// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fcpsep/stft.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>

namespace fcpsep
{

void require_uniform_geometry(const MultiSpectrogram & specs, const std::string & what)
{
  require(!specs.empty(), what + ": no spectrograms given");
  for (const auto & s : specs) {
    require<GeometryError>(
      s.rows() == specs.front().rows() && s.cols() == specs.front().cols(),
      what + ": spectrograms differ in shape");
  }
}

void require_same_geometry(const Spectrogram & a, const Spectrogram & b, const std::string & what)
{
  require<GeometryError>(
    a.rows() == b.rows() && a.cols() == b.cols(), what + ": spectrogram shapes differ");
}

void StftConfig::validate() const
{
  require(sample_rate > 0, "stft: sample_rate must be positive");
  require(win_len > 0 && hop > 0 && fft_size > 0, "stft: sizes must be positive");
  require(win_len % hop == 0, "stft: hop must divide win_len");
  require(fft_size >= win_len, "stft: fft_size must be >= win_len");
}

int num_frames(std::size_t num_samples, const StftConfig & cfg)
{
  // Last frame is the one starting at or before the final (padded) sample.
  const auto covered = static_cast<std::size_t>(cfg.head_pad()) + num_samples;
  return static_cast<int>((covered - 1) / static_cast<std::size_t>(cfg.hop)) + 1;
}

std::size_t max_output_length(int frames, const StftConfig & cfg)
{
  if (frames <= 0) {
    return 0;
  }
  // Samples covered by the full complement of win_len / hop frames.
  const long covered = static_cast<long>(frames) * cfg.hop - cfg.head_pad();
  return covered > 0 ? static_cast<std::size_t>(covered) : 0;
}

Eigen::VectorXd analysis_window(const StftConfig & cfg)
{
  cfg.validate();
  Eigen::VectorXd w(cfg.win_len);
  for (int n = 0; n < cfg.win_len; ++n) {
    // periodic Hann
    const double hann =
      0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / static_cast<double>(cfg.win_len));
    switch (cfg.window) {
      case WindowKind::SqrtHann: w(n) = std::sqrt(hann); break;
      case WindowKind::Hann: w(n) = hann; break;
      case WindowKind::Rectangular: w(n) = 1.0; break;
    }
  }
  return w;
}

Eigen::VectorXd synthesis_window(const StftConfig & cfg)
{
  const Eigen::VectorXd w = analysis_window(cfg);
  Eigen::VectorXd norm = Eigen::VectorXd::Zero(cfg.hop);
  for (int n = 0; n < cfg.win_len; ++n) {
    norm(n % cfg.hop) += w(n) * w(n);
  }
  require<NumericalError>(norm.minCoeff() > 0.0, "stft: window violates overlap-add condition");
  Eigen::VectorXd s(cfg.win_len);
  for (int n = 0; n < cfg.win_len; ++n) {
    s(n) = w(n) / norm(n % cfg.hop);
  }
  return s;
}

Spectrogram stft(const Eigen::Ref<const Signal> & audio, const StftConfig & cfg)
{
  cfg.validate();
  require(audio.size() > 0, "stft: empty audio");

  const auto n_samples = static_cast<std::size_t>(audio.size());
  const int frames = num_frames(n_samples, cfg);
  const int head = cfg.head_pad();
  const Eigen::VectorXd window = analysis_window(cfg);

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> frame(static_cast<std::size_t>(cfg.fft_size));
  std::vector<Complex> spectrum;

  Spectrogram out(frames, cfg.bins());
  for (int t = 0; t < frames; ++t) {
    std::fill(frame.begin(), frame.end(), 0.0);
    const long start = static_cast<long>(t) * cfg.hop - head;
    for (int n = 0; n < cfg.win_len; ++n) {
      const long idx = start + n;
      if (idx >= 0 && idx < static_cast<long>(n_samples)) {
        frame[static_cast<std::size_t>(n)] = audio(idx) * window(n);
      }
    }
    fft.fwd(spectrum, frame);
    for (int f = 0; f < cfg.bins(); ++f) {
      out(t, f) = spectrum[static_cast<std::size_t>(f)];
    }
  }
  return out;
}

Signal istft(const Spectrogram & spec, const StftConfig & cfg, std::size_t out_len)
{
  cfg.validate();
  require<GeometryError>(spec.cols() == cfg.bins(), "istft: bin count does not match config");
  const int frames = static_cast<int>(spec.rows());
  require<GeometryError>(
    out_len <= max_output_length(frames, cfg), "istft: out_len exceeds the covered range");

  const int head = cfg.head_pad();
  const Eigen::VectorXd window = synthesis_window(cfg);

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<Complex> spectrum(static_cast<std::size_t>(cfg.bins()));
  std::vector<double> frame;

  Signal out = Signal::Zero(static_cast<Eigen::Index>(out_len));
  for (int t = 0; t < frames; ++t) {
    for (int f = 0; f < cfg.bins(); ++f) {
      spectrum[static_cast<std::size_t>(f)] = spec(t, f);
    }
    fft.inv(frame, spectrum);
    const long start = static_cast<long>(t) * cfg.hop - head;
    for (int n = 0; n < cfg.win_len; ++n) {
      const long idx = start + n;
      if (idx >= 0 && idx < static_cast<long>(out_len)) {
        out(idx) += frame[static_cast<std::size_t>(n)] * window(n);
      }
    }
  }
  return out;
}

MultiSpectrogram stft_all(const MultiSignal & audio, const StftConfig & cfg)
{
  MultiSpectrogram out;
  out.reserve(audio.size());
  for (const auto & a : audio) {
    out.push_back(stft(a, cfg));
  }
  return out;
}

MultiSignal istft_all(const MultiSpectrogram & specs, const StftConfig & cfg, std::size_t out_len)
{
  MultiSignal out;
  out.reserve(specs.size());
  for (const auto & s : specs) {
    out.push_back(istft(s, cfg, out_len));
  }
  return out;
}

}  // namespace fcpsep
