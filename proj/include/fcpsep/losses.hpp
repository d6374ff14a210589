// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FCPSEP_LOSSES_HPP_
#define FCPSEP_LOSSES_HPP_

#include "fcpsep/core.hpp"
#include "fcpsep/fcp.hpp"

#include <ostream>
#include <vector>

namespace fcpsep
{

/// Which mixture-consistency form to evaluate.
enum class LossVariant
{
  RefUnfiltered,  // reference mic compared against the plain sum of estimates
  AllFiltered,    // every mic, reference included, compared against filtered sums
};

const char * to_string(LossVariant v);
LossVariant parse_loss_variant(const std::string & name);  // "eq4" / "eq9"

/// Default FCP taps per variant: 19 past + 1 future frame when the reference
/// is unfiltered, 19 past frames (causal) when every mic is filtered.
FcpConfig default_fcp_config(LossVariant v);

struct LossWeights
{
  Eigen::VectorXd alpha;  // per-mic weights; empty means all ones
  double gamma = 0.04;    // weight of the magnitude-scattering term

  /// alpha resolved for P microphones; throws ConfigError when invalid.
  Eigen::VectorXd alpha_for(int mics) const;
};

struct LossBreakdown
{
  Eigen::VectorXd mc_per_mic;    // unweighted per-mic consistency terms
  Eigen::VectorXd isms_per_mic;  // unweighted per-mic scattering ratios
  double mc_total = 0.0;         // sum_p alpha_p * mc_per_mic(p)
  double isms_total = 0.0;       // sum_p alpha_p * isms_per_mic(p)
  double gamma = 0.0;
  double combined = 0.0;         // mc_total + gamma * isms_total
};

/// sum_{t,f} (|dRe| + |dIm| + |d magnitude|) / sum_{t,f} |Y|. Zero iff yhat == y.
template<typename DerivedY, typename DerivedH>
double tf_abs_loss(const Eigen::MatrixBase<DerivedY> & y, const Eigen::MatrixBase<DerivedH> & yhat)
{
  require<GeometryError>(
    y.rows() == yhat.rows() && y.cols() == yhat.cols(), "tf_abs_loss: shapes differ");
  const auto ya = y.array();
  const auto ha = yhat.array();
  const double norm = ya.abs().sum();
  require<DegenerateInputError>(norm > 0.0, "tf_abs_loss: all-zero reference");
  const double num = (ya.real() - ha.real()).abs().sum() + (ya.imag() - ha.imag()).abs().sum() +
                     (ya.abs() - ha.abs()).abs().sum();
  return num / norm;
}

/// Mixture consistency with the reference microphone unfiltered; `bank`
/// supplies filters for microphones 1..P-1 (its reference row is ignored).
LossBreakdown mc_loss_ref_unfiltered(
  const MultiSpectrogram & mixtures, const MultiSpectrogram & zhats, const RelativeFilterBank & bank,
  const LossWeights & weights = {});

struct McResult
{
  LossBreakdown loss;
  RelativeFilterBank filters;
};

/// Mixture consistency with every microphone filtered; filters are
/// re-estimated from (zhats, mixtures) with weighted FCP.
McResult mc_loss_all_filtered(
  const MultiSpectrogram & mixtures, const MultiSpectrogram & zhats, const FcpConfig & cfg,
  const LossWeights & weights = {});

/// Per-mic ratio of mean per-frame log-magnitude variance of the filtered
/// estimates to that of the mixture. images[p][c]. Variances are population
/// variances over bins; magnitudes are floored at log_floor.
Eigen::VectorXd isms_per_mic(
  const std::vector<MultiSpectrogram> & images, const MultiSpectrogram & mixtures,
  double log_floor = 1e-8);

double isms_loss(
  const std::vector<MultiSpectrogram> & images, const MultiSpectrogram & mixtures,
  const LossWeights & weights = {}, double log_floor = 1e-8);

struct LossConfig
{
  LossVariant variant = LossVariant::AllFiltered;
  FcpConfig fcp = default_fcp_config(LossVariant::AllFiltered);
  LossWeights weights;
  double log_floor = 1e-8;
};

/// Consistency plus gamma-weighted scattering, filters re-estimated.
LossBreakdown combined_loss(
  const MultiSpectrogram & mixtures, const MultiSpectrogram & zhats, const LossConfig & cfg);

/// Fills the scattering fields and the combined value of `mc`.
LossBreakdown combine(LossBreakdown mc, const Eigen::VectorXd & isms_per_mic, const LossWeights & weights);

/// Loss evaluated on hypothesised two-speaker outputs
///   Z1 = mu X_1(1) + nu X_1(2) + e_1/2,  Z2 = (1-mu) X_1(1) + (1-nu) X_1(2) + e_1/2.
struct SurfaceInputs
{
  MultiSpectrogram ref_images;  // X_1(1), X_1(2)
  Spectrogram ref_noise;        // e_1
  MultiSpectrogram mixtures;    // Y_1 .. Y_P
};

struct SurfacePoint
{
  double mu = 0.0;
  double nu = 0.0;
  double loss = 0.0;
};

struct SurfaceOptions
{
  int grid = 21;
  LossConfig loss{LossVariant::RefUnfiltered, default_fcp_config(LossVariant::RefUnfiltered), {}, 1e-8};
  bool freeze_filters = false;  // estimate filters once at (mu, nu) = (1, 0)
};

/// Grid over [0,1]^2, ordered mu-major then nu. Only the consistency term is
/// evaluated.
std::vector<SurfacePoint> loss_surface(const SurfaceInputs & in, const SurfaceOptions & opt = {});

void write_surface_csv(std::ostream & os, const std::vector<SurfacePoint> & points);

}  // namespace fcpsep

#endif  // FCPSEP_LOSSES_HPP_
