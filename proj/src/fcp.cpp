// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fcpsep/fcp.hpp"

#include "stacking.hpp"

#include <string>

namespace fcpsep
{

void FcpConfig::validate() const
{
  require(past >= 0 && future >= 0, "fcp: past and future taps must be >= 0");
  require(taps() <= kMaxTaps, "fcp: at most " + std::to_string(kMaxTaps) + " taps");
  require(xi > 0.0, "fcp: xi must be positive");
  require(ridge >= 0.0, "fcp: ridge must be >= 0");
}

RelativeFilter identity_filter(int bins, int past, int future)
{
  RelativeFilter g;
  g.past = past;
  g.future = future;
  g.coeffs = Eigen::MatrixXcd::Zero(bins, past + 1 + future);
  g.coeffs.col(past).setOnes();
  return g;
}

std::vector<Eigen::MatrixXd> fcp_weight(const MultiSpectrogram & mixtures, double xi)
{
  require_uniform_geometry(mixtures, "fcp_weight");
  require(xi > 0.0, "fcp_weight: xi must be positive");

  Eigen::MatrixXd mean_power = Eigen::MatrixXd::Zero(mixtures.front().rows(), mixtures.front().cols());
  for (const auto & y : mixtures) {
    require<NumericalError>(y.allFinite(), "fcp_weight: non-finite mixture");
    mean_power += y.cwiseAbs2();
  }
  mean_power /= static_cast<double>(mixtures.size());
  const double peak = mean_power.maxCoeff();
  require<DegenerateInputError>(peak > 0.0, "fcp_weight: all-zero mixture");

  std::vector<Eigen::MatrixXd> weights;
  weights.reserve(mixtures.size());
  for (const auto & y : mixtures) {
    weights.push_back((y.cwiseAbs2().array() + xi * peak).matrix());
  }
  return weights;
}

namespace
{

// Builds the row-weighted design matrix D (frames x taps) and target so that
// the standard least-squares coefficients c = (D^H D)^-1 D^H y give g = conj(c).
void weighted_system(
  const Spectrogram & zhat, const Spectrogram & y, const Eigen::MatrixXd * weights,
  const FcpConfig & cfg, int bin, Eigen::MatrixXcd & design, Eigen::VectorXcd & target)
{
  const int frames = static_cast<int>(zhat.rows());
  design.resize(frames, cfg.taps());
  detail::fill_window(zhat, bin, cfg.past, cfg.taps(), design);
  target = y.col(bin);
  if (weights != nullptr) {
    const Eigen::ArrayXd scale = weights->col(bin).array().rsqrt();
    design.array().colwise() *= scale.cast<Complex>();
    target.array() *= scale.cast<Complex>();
  }
}

Eigen::VectorXcd solve_bin(
  const Spectrogram & zhat, const Spectrogram & y, const Eigen::MatrixXd * weights,
  const FcpConfig & cfg, int bin)
{
  Eigen::MatrixXcd design;
  Eigen::VectorXcd target;
  weighted_system(zhat, y, weights, cfg, bin, design, target);

  const int taps = cfg.taps();
  Eigen::MatrixXcd gram = design.adjoint() * design;
  const double trace = gram.diagonal().real().sum();
  if (!(trace > 0.0)) {
    return Eigen::VectorXcd::Zero(taps);
  }
  gram.diagonal().array() += cfg.ridge * trace / taps;
  const Eigen::VectorXcd rhs = design.adjoint() * target;

  Eigen::LLT<Eigen::MatrixXcd> llt(gram);
  Eigen::VectorXcd c;
  if (llt.info() == Eigen::Success) {
    c = llt.solve(rhs);
  } else {
    // Only reachable with ridge == 0 on a rank-deficient window.
    c = gram.completeOrthogonalDecomposition().solve(rhs);
  }
  return c.conjugate();
}

void check_inputs(const Spectrogram & zhat, const Spectrogram & y, const Eigen::MatrixXd * weights)
{
  require_same_geometry(zhat, y, "estimate_filter");
  if (weights != nullptr) {
    require<GeometryError>(
      weights->rows() == y.rows() && weights->cols() == y.cols(),
      "estimate_filter: weight shape differs from mixture");
    require<DegenerateInputError>(
      (weights->array() > 0.0).all(), "estimate_filter: weights must be positive");
  }
  require<NumericalError>(
    zhat.allFinite() && y.allFinite(), "estimate_filter: non-finite input");
}

RelativeFilter estimate_impl(
  const Spectrogram & zhat, const Spectrogram & y, const Eigen::MatrixXd * weights,
  const FcpConfig & cfg)
{
  cfg.validate();
  check_inputs(zhat, y, weights);
  RelativeFilter g;
  g.past = cfg.past;
  g.future = cfg.future;
  g.coeffs.resize(y.cols(), cfg.taps());
  for (int f = 0; f < y.cols(); ++f) {
    g.coeffs.row(f) = solve_bin(zhat, y, weights, cfg, f).transpose();
  }
  return g;
}

}  // namespace

RelativeFilter estimate_filter(
  const Spectrogram & zhat, const Spectrogram & y, const Eigen::MatrixXd & weights,
  const FcpConfig & cfg)
{
  return estimate_impl(zhat, y, &weights, cfg);
}

RelativeFilter estimate_filter(const Spectrogram & zhat, const Spectrogram & y, const FcpConfig & cfg)
{
  return estimate_impl(zhat, y, nullptr, cfg);
}

Spectrogram fcp_image(const Spectrogram & zhat, const RelativeFilter & filter)
{
  require<GeometryError>(filter.bins() == zhat.cols(), "fcp_image: filter bins differ from estimate");
  const int frames = static_cast<int>(zhat.rows());
  Spectrogram out = Spectrogram::Zero(frames, zhat.cols());
  for (int f = 0; f < zhat.cols(); ++f) {
    for (int k = 0; k < filter.taps(); ++k) {
      const Complex w = std::conj(filter.coeffs(f, k));
      if (w == Complex(0.0, 0.0)) {
        continue;
      }
      const int shift = k - filter.past;
      const int t0 = std::max(0, -shift);
      const int t1 = std::min(frames, frames - shift);
      if (t1 > t0) {
        out.col(f).segment(t0, t1 - t0) += w * zhat.col(f).segment(t0 + shift, t1 - t0);
      }
    }
  }
  return out;
}

NormalEquations fcp_normal_equations(
  const Spectrogram & zhat, const Spectrogram & y, const Eigen::MatrixXd & weights,
  const FcpConfig & cfg, int bin)
{
  cfg.validate();
  check_inputs(zhat, y, &weights);
  Eigen::MatrixXcd design;
  Eigen::VectorXcd target;
  weighted_system(zhat, y, &weights, cfg, bin, design, target);
  NormalEquations eq;
  // sum_t z~ z~^H / w = conj(D^H D);  sum_t z~ y^* / w = conj(D^H y)
  eq.gram = (design.adjoint() * design).conjugate();
  const double trace = eq.gram.diagonal().real().sum();
  eq.gram.diagonal().array() += cfg.ridge * trace / cfg.taps();
  eq.rhs = (design.adjoint() * target).conjugate();
  return eq;
}

double fcp_residual(
  const Spectrogram & zhat, const Spectrogram & y, const Eigen::MatrixXd & weights,
  const Eigen::VectorXcd & g, int past, int bin)
{
  const int taps = static_cast<int>(g.size());
  Eigen::MatrixXcd window(zhat.rows(), taps);
  detail::fill_window(zhat, bin, past, taps, window);
  const Eigen::VectorXcd pred = window * g.conjugate();
  return ((y.col(bin) - pred).cwiseAbs2().array() / weights.col(bin).array()).sum();
}

RelativeFilterBank estimate_filter_bank(
  const MultiSpectrogram & zhats, const MultiSpectrogram & mixtures, const FcpConfig & cfg,
  bool filter_reference)
{
  require_uniform_geometry(zhats, "estimate_filter_bank (estimates)");
  require_uniform_geometry(mixtures, "estimate_filter_bank (mixtures)");
  require_same_geometry(zhats.front(), mixtures.front(), "estimate_filter_bank");

  const auto weights = fcp_weight(mixtures, cfg.xi);
  RelativeFilterBank bank;
  bank.mics = static_cast<int>(mixtures.size());
  bank.speakers = static_cast<int>(zhats.size());
  bank.filters.reserve(static_cast<std::size_t>(bank.mics * bank.speakers));
  for (int p = 0; p < bank.mics; ++p) {
    for (int c = 0; c < bank.speakers; ++c) {
      if (p == 0 && !filter_reference) {
        bank.filters.push_back(identity_filter(static_cast<int>(mixtures.front().cols()), cfg.past, cfg.future));
      } else {
        bank.filters.push_back(estimate_filter(zhats[c], mixtures[p], weights[p], cfg));
      }
    }
  }
  return bank;
}

std::vector<MultiSpectrogram> fcp_images(const MultiSpectrogram & zhats, const RelativeFilterBank & bank)
{
  require<GeometryError>(
    static_cast<int>(zhats.size()) == bank.speakers, "fcp_images: speaker count differs from bank");
  std::vector<MultiSpectrogram> images(static_cast<std::size_t>(bank.mics));
  for (int p = 0; p < bank.mics; ++p) {
    for (int c = 0; c < bank.speakers; ++c) {
      images[p].push_back(fcp_image(zhats[c], bank.at(p, c)));
    }
  }
  return images;
}

}  // namespace fcpsep
