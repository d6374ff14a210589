// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fcpsep/losses.hpp"

#include "stacking.hpp"

#include <array>
#include <cmath>
#include <iomanip>
#include <locale>

namespace fcpsep
{

const char * to_string(LossVariant v)
{
  return v == LossVariant::RefUnfiltered ? "eq4" : "eq9";
}

LossVariant parse_loss_variant(const std::string & name)
{
  if (name == "eq4" || name == "ref-unfiltered") {
    return LossVariant::RefUnfiltered;
  }
  if (name == "eq9" || name == "all-filtered") {
    return LossVariant::AllFiltered;
  }
  throw ConfigError("unknown loss variant '" + name + "' (expected eq4 or eq9)");
}

FcpConfig default_fcp_config(LossVariant v)
{
  FcpConfig cfg;
  cfg.past = 19;
  cfg.future = v == LossVariant::RefUnfiltered ? 1 : 0;
  return cfg;
}

Eigen::VectorXd LossWeights::alpha_for(int mics) const
{
  require(gamma >= 0.0, "loss weights: gamma must be >= 0");
  if (alpha.size() == 0) {
    return Eigen::VectorXd::Ones(mics);
  }
  require<GeometryError>(alpha.size() == mics, "loss weights: alpha needs one entry per microphone");
  require((alpha.array() >= 0.0).all(), "loss weights: alpha must be >= 0");
  require((alpha.array() > 0.0).any(), "loss weights: at least one alpha must be positive");
  return alpha;
}

namespace
{

void check_loss_inputs(const MultiSpectrogram & mixtures, const MultiSpectrogram & zhats)
{
  require_uniform_geometry(mixtures, "mc_loss (mixtures)");
  require_uniform_geometry(zhats, "mc_loss (estimates)");
  require_same_geometry(mixtures.front(), zhats.front(), "mc_loss");
}

LossBreakdown mc_with_bank(
  const MultiSpectrogram & mixtures, const MultiSpectrogram & zhats, const RelativeFilterBank & bank,
  const LossWeights & weights, bool filter_reference)
{
  check_loss_inputs(mixtures, zhats);
  const int mics = static_cast<int>(mixtures.size());
  require<GeometryError>(
    bank.mics == mics && bank.speakers == static_cast<int>(zhats.size()),
    "mc_loss: filter bank does not match mixtures / estimates");
  const Eigen::VectorXd alpha = weights.alpha_for(mics);

  LossBreakdown out;
  out.mc_per_mic.resize(mics);
  out.isms_per_mic = Eigen::VectorXd::Zero(mics);
  for (int p = 0; p < mics; ++p) {
    Spectrogram sum = Spectrogram::Zero(mixtures[p].rows(), mixtures[p].cols());
    for (std::size_t c = 0; c < zhats.size(); ++c) {
      if (p == 0 && !filter_reference) {
        sum += zhats[c];
      } else {
        sum += fcp_image(zhats[c], bank.at(p, static_cast<int>(c)));
      }
    }
    out.mc_per_mic(p) = tf_abs_loss(mixtures[p], sum);
  }
  out.mc_total = alpha.dot(out.mc_per_mic);
  out.gamma = weights.gamma;
  out.combined = out.mc_total;
  return out;
}

}  // namespace

LossBreakdown mc_loss_ref_unfiltered(
  const MultiSpectrogram & mixtures, const MultiSpectrogram & zhats, const RelativeFilterBank & bank,
  const LossWeights & weights)
{
  return mc_with_bank(mixtures, zhats, bank, weights, false);
}

McResult mc_loss_all_filtered(
  const MultiSpectrogram & mixtures, const MultiSpectrogram & zhats, const FcpConfig & cfg,
  const LossWeights & weights)
{
  check_loss_inputs(mixtures, zhats);
  McResult r;
  r.filters = estimate_filter_bank(zhats, mixtures, cfg, true);
  r.loss = mc_with_bank(mixtures, zhats, r.filters, weights, true);
  return r;
}

namespace
{

// Sum over frames of the population variance of log magnitudes across bins.
double summed_frame_log_variance(const Spectrogram & s, double log_floor)
{
  const Eigen::ArrayXXd logmag = s.cwiseAbs().array().max(log_floor).log();
  const Eigen::ArrayXd mean = logmag.rowwise().mean();
  const Eigen::ArrayXd var = (logmag.colwise() - mean).square().rowwise().mean();
  return var.sum();
}

}  // namespace

Eigen::VectorXd isms_per_mic(
  const std::vector<MultiSpectrogram> & images, const MultiSpectrogram & mixtures, double log_floor)
{
  require_uniform_geometry(mixtures, "isms (mixtures)");
  require<GeometryError>(images.size() == mixtures.size(), "isms: need images for every microphone");
  require(log_floor > 0.0, "isms: log_floor must be positive");

  Eigen::VectorXd out(static_cast<Eigen::Index>(mixtures.size()));
  for (std::size_t p = 0; p < mixtures.size(); ++p) {
    require(!images[p].empty(), "isms: no speaker images");
    const double denom = summed_frame_log_variance(mixtures[p], log_floor);
    require<DegenerateInputError>(denom > 0.0, "isms: mixture has zero log-magnitude variance");
    double num = 0.0;
    for (const auto & img : images[p]) {
      require_same_geometry(img, mixtures[p], "isms");
      num += summed_frame_log_variance(img, log_floor);
    }
    num /= static_cast<double>(images[p].size());
    out(static_cast<Eigen::Index>(p)) = num / denom;
  }
  return out;
}

double isms_loss(
  const std::vector<MultiSpectrogram> & images, const MultiSpectrogram & mixtures,
  const LossWeights & weights, double log_floor)
{
  const Eigen::VectorXd per_mic = isms_per_mic(images, mixtures, log_floor);
  return weights.alpha_for(static_cast<int>(mixtures.size())).dot(per_mic);
}

LossBreakdown combine(LossBreakdown mc, const Eigen::VectorXd & isms, const LossWeights & weights)
{
  const Eigen::VectorXd alpha = weights.alpha_for(static_cast<int>(mc.mc_per_mic.size()));
  require<GeometryError>(isms.size() == alpha.size(), "combine: per-mic sizes differ");
  mc.isms_per_mic = isms;
  mc.isms_total = alpha.dot(isms);
  mc.gamma = weights.gamma;
  mc.combined = mc.mc_total + weights.gamma * mc.isms_total;
  return mc;
}

LossBreakdown combined_loss(
  const MultiSpectrogram & mixtures, const MultiSpectrogram & zhats, const LossConfig & cfg)
{
  check_loss_inputs(mixtures, zhats);
  const bool filter_ref = cfg.variant == LossVariant::AllFiltered;
  const RelativeFilterBank bank = estimate_filter_bank(zhats, mixtures, cfg.fcp, filter_ref);
  LossBreakdown mc = mc_with_bank(mixtures, zhats, bank, cfg.weights, filter_ref);
  auto images = fcp_images(zhats, bank);
  return combine(std::move(mc), isms_per_mic(images, mixtures, cfg.log_floor), cfg.weights);
}

namespace
{

// Weighted FCP on hypotheses Z = a_0 A + a_1 B + a_2 N with fixed real
// coefficients. The design matrix is linear in a, so every Gram and
// right-hand side is a combination of cross terms computed once per bin.
class BilinearFcp
{
public:
  BilinearFcp(
    const Spectrogram & a, const Spectrogram & b, const Spectrogram & n, const Spectrogram & y,
    const Eigen::MatrixXd & weights, const FcpConfig & cfg)
    : cfg_(cfg), frames_(static_cast<int>(y.rows())), bins_(static_cast<int>(y.cols())), parts_{&a, &b, &n}
  {
    const int taps = cfg.taps();
    cross_.resize(static_cast<std::size_t>(bins_));
    rhs_.resize(static_cast<std::size_t>(bins_));
    for (int f = 0; f < bins_; ++f) {
      const Eigen::ArrayXd scale = weights.col(f).array().rsqrt();
      std::array<Eigen::MatrixXcd, 3> w;
      for (int i = 0; i < 3; ++i) {
        w[i].resize(frames_, taps);
        detail::fill_window(*parts_[i], f, cfg.past, taps, w[i]);
        w[i].array().colwise() *= scale.cast<Complex>();
      }
      const Eigen::VectorXcd target = y.col(f).array() * scale.cast<Complex>();
      for (int i = 0; i < 3; ++i) {
        rhs_[f][i] = w[i].adjoint() * target;
        for (int j = 0; j < 3; ++j) {
          cross_[f][3 * i + j] = w[i].adjoint() * w[j];
        }
      }
      // Only the combinations i <= j are summed later: fold (j, i) into (i, j).
      for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
          cross_[f][3 * i + j] += cross_[f][3 * j + i];
        }
      }
    }
  }

  // sum_k conj(g_k) Z(t - past + k) for the filter fitted to Z. The inputs
  // passed to the constructor must outlive this object.
  Spectrogram image(const std::array<double, 3> & coef) const
  {
    const int taps = cfg_.taps();
    Spectrogram out(frames_, bins_);
    Eigen::MatrixXcd gram(taps, taps);
    Eigen::VectorXcd rhs(taps);
    Eigen::VectorXcd z(frames_);
    for (int f = 0; f < bins_; ++f) {
      gram.setZero();
      rhs.setZero();
      z.setZero();
      for (int i = 0; i < 3; ++i) {
        if (coef[i] == 0.0) {
          continue;
        }
        rhs += coef[i] * rhs_[f][i];
        z += coef[i] * parts_[i]->col(f);
        for (int j = i; j < 3; ++j) {
          if (coef[j] != 0.0) {
            gram += (coef[i] * coef[j]) * cross_[f][3 * i + j];
          }
        }
      }
      const double trace = gram.diagonal().real().sum();
      Eigen::VectorXcd c = Eigen::VectorXcd::Zero(taps);
      if (trace > 0.0) {
        gram.diagonal().array() += cfg_.ridge * trace / taps;
        Eigen::LLT<Eigen::MatrixXcd> llt(gram);
        c = llt.info() == Eigen::Success ? Eigen::VectorXcd(llt.solve(rhs))
                                         : Eigen::VectorXcd(gram.completeOrthogonalDecomposition().solve(rhs));
      }
      out.col(f).setZero();
      for (int k = 0; k < taps; ++k) {
        const int shift = k - cfg_.past;
        const int t0 = std::max(0, -shift);
        const int t1 = std::min(frames_, frames_ - shift);
        if (t1 > t0) {
          out.col(f).segment(t0, t1 - t0) += c(k) * z.segment(t0 + shift, t1 - t0);
        }
      }
    }
    return out;
  }

private:
  FcpConfig cfg_;
  int frames_;
  int bins_;
  std::array<const Spectrogram *, 3> parts_;
  std::vector<std::array<Eigen::MatrixXcd, 9>> cross_;
  std::vector<std::array<Eigen::VectorXcd, 3>> rhs_;
};

}  // namespace

std::vector<SurfacePoint> loss_surface(const SurfaceInputs & in, const SurfaceOptions & opt)
{
  require<ConfigError>(in.ref_images.size() == 2, "loss_surface: exactly two speakers required");
  require(opt.grid >= 2, "loss_surface: grid must have at least 2 points per axis");
  require_uniform_geometry(in.mixtures, "loss_surface (mixtures)");
  require_same_geometry(in.ref_images[0], in.mixtures.front(), "loss_surface");
  require_same_geometry(in.ref_images[1], in.mixtures.front(), "loss_surface");
  require_same_geometry(in.ref_noise, in.mixtures.front(), "loss_surface");
  opt.loss.fcp.validate();

  const bool filter_ref = opt.loss.variant == LossVariant::AllFiltered;
  const int mics = static_cast<int>(in.mixtures.size());
  const Eigen::VectorXd alpha = opt.loss.weights.alpha_for(mics);
  const Spectrogram half_noise = 0.5 * in.ref_noise;
  auto hypothesis = [&](double mu, double nu) {
    return MultiSpectrogram{
      mu * in.ref_images[0] + nu * in.ref_images[1] + half_noise,
      (1.0 - mu) * in.ref_images[0] + (1.0 - nu) * in.ref_images[1] + half_noise};
  };

  RelativeFilterBank frozen;
  std::vector<BilinearFcp> fits;
  if (opt.freeze_filters) {
    frozen = estimate_filter_bank(hypothesis(1.0, 0.0), in.mixtures, opt.loss.fcp, filter_ref);
  } else {
    const auto weights = fcp_weight(in.mixtures, opt.loss.fcp.xi);
    for (int p = filter_ref ? 0 : 1; p < mics; ++p) {
      fits.emplace_back(in.ref_images[0], in.ref_images[1], in.ref_noise, in.mixtures[p], weights[p], opt.loss.fcp);
    }
  }

  std::vector<SurfacePoint> points;
  points.reserve(static_cast<std::size_t>(opt.grid * opt.grid));
  for (int i = 0; i < opt.grid; ++i) {
    const double mu = static_cast<double>(i) / (opt.grid - 1);
    for (int j = 0; j < opt.grid; ++j) {
      const double nu = static_cast<double>(j) / (opt.grid - 1);
      double loss = 0.0;
      if (opt.freeze_filters) {
        loss = mc_with_bank(in.mixtures, hypothesis(mu, nu), frozen, opt.loss.weights, filter_ref).mc_total;
      } else {
        for (int p = 0; p < mics; ++p) {
          if (alpha(p) == 0.0) {
            continue;
          }
          Spectrogram sum;
          if (p == 0 && !filter_ref) {
            sum = in.ref_images[0] + in.ref_images[1] + in.ref_noise;
          } else {
            const BilinearFcp & fit = fits[static_cast<std::size_t>(filter_ref ? p : p - 1)];
            sum = fit.image({mu, nu, 0.5}) + fit.image({1.0 - mu, 1.0 - nu, 0.5});
          }
          loss += alpha(p) * tf_abs_loss(in.mixtures[p], sum);
        }
      }
      points.push_back({mu, nu, loss});
    }
  }
  return points;
}

void write_surface_csv(std::ostream & os, const std::vector<SurfacePoint> & points)
{
  os.imbue(std::locale::classic());
  os << "mu,nu,loss\n" << std::setprecision(12);
  for (const auto & p : points) {
    os << p.mu << ',' << p.nu << ',' << p.loss << '\n';
  }
}

}  // namespace fcpsep
