// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FCPSEP_FCP_HPP_
#define FCPSEP_FCP_HPP_

#include "fcpsep/core.hpp"

#include <vector>

namespace fcpsep
{

/// Sub-band forward convolutive prediction settings. The filter stacks
/// `past` earlier frames, the current frame and `future` later frames.
struct FcpConfig
{
  int past = 19;
  int future = 0;
  double xi = 1e-4;     // floor of the per-bin weighting term
  double ridge = 1e-6;  // diagonal loading, relative to trace(Gram) / taps

  static constexpr int kMaxTaps = 64;

  int taps() const { return past + 1 + future; }
  void validate() const;
};

/// Per-frequency complex filter. Column k multiplies the frame at offset
/// k - past relative to the current frame, and the filtered value is
/// g^H z~ = sum_k conj(g_k) z(t - past + k).
struct RelativeFilter
{
  int past = 0;
  int future = 0;
  Eigen::MatrixXcd coeffs;  // bins x taps

  int taps() const { return past + 1 + future; }
  int bins() const { return static_cast<int>(coeffs.rows()); }
  /// Column holding the coefficient applied to z(t - lag).
  int index_of_lag(int lag) const { return past - lag; }
};

/// Filters for every (microphone, speaker) pair, all with the same taps.
struct RelativeFilterBank
{
  int mics = 0;
  int speakers = 0;
  std::vector<RelativeFilter> filters;  // row-major in (mic, speaker)

  RelativeFilter & at(int mic, int speaker) { return filters.at(index(mic, speaker)); }
  const RelativeFilter & at(int mic, int speaker) const { return filters.at(index(mic, speaker)); }

private:
  std::size_t index(int mic, int speaker) const
  {
    return static_cast<std::size_t>(mic) * static_cast<std::size_t>(speakers) +
           static_cast<std::size_t>(speaker);
  }
};

/// A filter passing the current frame through unchanged.
RelativeFilter identity_filter(int bins, int past = 0, int future = 0);

/// Weighting term per microphone (frames x bins):
///   xi * max_{t,f}(mean_p |Y_p(t,f)|^2) + |Y_p(t,f)|^2.
/// It carries no speaker dependence, so one set serves every speaker.
std::vector<Eigen::MatrixXd> fcp_weight(const MultiSpectrogram & mixtures, double xi = 1e-4);

/// Weighted least-squares relative filter predicting `y` from `zhat`.
RelativeFilter estimate_filter(
  const Spectrogram & zhat, const Spectrogram & y, const Eigen::MatrixXd & weights,
  const FcpConfig & cfg);

/// Unweighted variant (all weights equal to one).
RelativeFilter estimate_filter(const Spectrogram & zhat, const Spectrogram & y, const FcpConfig & cfg);

/// Filtered estimate g^H z~ for every frame and bin.
Spectrogram fcp_image(const Spectrogram & zhat, const RelativeFilter & filter);

/// Weighted normal equations at one bin in the g-convention, with the ridge
/// term already on the diagonal: gram * g = rhs.
struct NormalEquations
{
  Eigen::MatrixXcd gram;
  Eigen::VectorXcd rhs;
};

NormalEquations fcp_normal_equations(
  const Spectrogram & zhat, const Spectrogram & y, const Eigen::MatrixXd & weights,
  const FcpConfig & cfg, int bin);

/// Weighted prediction residual sum_t |y - g^H z~|^2 / weight at one bin.
double fcp_residual(
  const Spectrogram & zhat, const Spectrogram & y, const Eigen::MatrixXd & weights,
  const Eigen::VectorXcd & g, int past, int bin);

/// Filters from each speaker estimate to each mixture, weighted as in
/// fcp_weight. With `filter_reference` false the reference microphone (0)
/// gets identity filters instead of estimated ones.
RelativeFilterBank estimate_filter_bank(
  const MultiSpectrogram & zhats, const MultiSpectrogram & mixtures, const FcpConfig & cfg,
  bool filter_reference);

/// images[p][c] = fcp_image(zhats[c], bank.at(p, c)).
std::vector<MultiSpectrogram> fcp_images(
  const MultiSpectrogram & zhats, const RelativeFilterBank & bank);

}  // namespace fcpsep

#endif  // FCPSEP_FCP_HPP_
