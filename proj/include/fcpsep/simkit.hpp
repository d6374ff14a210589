// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FCPSEP_SIMKIT_HPP_
#define FCPSEP_SIMKIT_HPP_

#include "fcpsep/core.hpp"
#include "fcpsep/fcp.hpp"
#include "fcpsep/rng.hpp"
#include "fcpsep/stft.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace fcpsep
{

/// A synthetic multi-microphone scene: dry sources and one FIR room impulse
/// response per (speaker, microphone).
struct SimScene
{
  int speakers = 0;
  int mics = 0;
  int sample_rate = 8000;
  MultiSignal dry;                       // [c]
  std::vector<MultiSignal> rirs;         // [c][p]
  std::optional<double> noise_snr_db;    // unset: noiseless
  std::uint64_t seed = 0;

  void validate() const;
};

/// Ground truth produced by render().
struct SceneTruth
{
  int sample_rate = 8000;
  std::vector<MultiSignal> images;  // [c][p], x_p(c) = h_p(c) * s(c)
  MultiSignal mixtures;             // [p]
  MultiSignal noise;                // [p]

  int speakers() const { return static_cast<int>(images.size()); }
  int mics() const { return static_cast<int>(mixtures.size()); }
  std::size_t length() const { return mixtures.empty() ? 0 : static_cast<std::size_t>(mixtures.front().size()); }
};

/// Full linear convolution of every dry source with every RIR, plus white
/// Gaussian noise scaled per microphone to hit noise_snr_db exactly.
/// Every output has length dry + max_rir_len - 1.
SceneTruth render(const SimScene & scene);

/// Parameters of random_scene().
///
/// RIR taps follow a Gaussian tail under the amplitude envelope
/// 10^(-n / decay), decay = decay_ms * sample_rate / 1000 samples, i.e. the
/// tail falls 20 dB every decay_ms and 60 dB after 3 * decay_ms. The direct
/// path sits at an integer delay in [0, max_delay].
///
/// With relative_taps > 0 the scene is built so the relation between the
/// reference microphone and every other microphone is an exact sub-band
/// filter: h_p(c) = h_1(c) * u_p(c), where u_p(c) has relative_taps
/// coefficients spaced relative_spacing samples apart. With
/// relative_spacing equal to the STFT hop, X_p(c,t,f) equals
/// sum_q u_q X_1(c,t-q,f) exactly.
struct SceneParams
{
  int speakers = 2;
  int mics = 3;
  std::uint64_t seed = 0;
  int sample_rate = 8000;
  int num_samples = 8000;
  int rir_len = 256;
  double decay_ms = 20.0;
  int max_delay = 8;
  int relative_taps = 0;
  int relative_spacing = 64;
  std::optional<double> noise_snr_db;
  MultiSignal dry_override;  // used instead of generated sources when non-empty

  void validate() const;
};

SimScene random_scene(const SceneParams & params);

/// Gated, spectrally tilted noise with a speech-like on/off envelope,
/// normalized to unit RMS.
Signal modulated_noise(int num_samples, int sample_rate, Rng & rng);

/// Least-squares sub-band filter mapping the STFT of `ref_image` to the STFT
/// of `target_image`, solved per bin by orthogonal decomposition of the
/// stacked design matrix (minimum-norm when rank deficient). `past` and
/// `future` follow the RelativeFilter convention.
RelativeFilter oracle_relative_rir(
  const Signal & ref_image, const Signal & target_image, int past, int future,
  const StftConfig & cfg = {});

/// Equation and unknown counts of the multi-microphone model: one equation
/// per mixture coefficient, one unknown per image coefficient without the
/// relative-filter constraint, and T*F*C + F*(P-1)*E*C with it.
struct UnknownCount
{
  long long equations = 0;
  long long unconstrained_unknowns = 0;
  long long constrained_unknowns = 0;

  bool overdetermined() const { return constrained_unknowns < equations; }
};

UnknownCount count_unknowns(long long frames, long long bins, long long mics, long long speakers, long long filter_taps);

}  // namespace fcpsep

#endif  // FCPSEP_SIMKIT_HPP_
