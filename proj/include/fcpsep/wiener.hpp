// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FCPSEP_WIENER_HPP_
#define FCPSEP_WIENER_HPP_

#include "fcpsep/core.hpp"

namespace fcpsep
{

/// Time-domain least-squares filter of `taps` coefficients. Tap k multiplies
/// zhat[n + future_taps - k], so taps [0, future_taps) look ahead, tap
/// future_taps is the current sample and the rest look back.
struct WienerConfig
{
  int taps = 512;
  int future_taps = 100;
  double ridge = 0.0;  // diagonal loading relative to trace / taps

  static constexpr int kMaxTaps = 2048;
  void validate() const;
};

/// Filters `zhat` with `h`; output has the length of `zhat` (zero-padded
/// linear convolution, trimmed to 'same' alignment).
Signal apply_wiener(const Signal & h, const Signal & zhat, int future_taps);

/// Minimizes ||y - h * zhat||^2. Throws NumericalError when the normal
/// equations are singular and ridge is zero.
Signal estimate_wiener(const Signal & zhat, const Signal & y, const WienerConfig & cfg);

struct WienerNormalEquations
{
  Eigen::MatrixXd gram;  // near-Toeplitz; exact for the 'same' convolution
  Eigen::VectorXd rhs;
};

WienerNormalEquations wiener_normal_equations(const Signal & zhat, const Signal & y, const WienerConfig & cfg);

struct IrasResult
{
  double loss = 0.0;
  Eigen::VectorXd per_mic;           // unweighted ||y_p - sum_c h*z||_1 / ||y_p||_1
  std::vector<MultiSignal> images;   // [p][c] filtered estimates
};

/// Sum over mics of alpha_p * ||y_p - sum_c h_p(c) * zhat(c)||_1 / ||y_p||_1,
/// with each h_p(c) fitted separately by estimate_wiener.
IrasResult iras(
  const MultiSignal & mixtures, const MultiSignal & zhats, const WienerConfig & cfg,
  const Eigen::VectorXd & alpha = {});

double iras_loss(
  const MultiSignal & mixtures, const MultiSignal & zhats, const WienerConfig & cfg,
  const Eigen::VectorXd & alpha = {});

/// Time-domain taps spanning the same duration as a K-tap sub-band filter:
/// ((K - 1) * hop_ms + win_ms) / 1000 * sample_rate.
int taps_from_stft_filter(int stft_taps, int hop_ms = 8, int win_ms = 32, int sample_rate = 8000);

}  // namespace fcpsep

#endif  // FCPSEP_WIENER_HPP_
