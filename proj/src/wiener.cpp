// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fcpsep/wiener.hpp"

#include <algorithm>
#include <string>

namespace fcpsep
{

void WienerConfig::validate() const
{
  require(taps >= 1, "wiener: taps must be >= 1");
  require(taps <= kMaxTaps, "wiener: at most " + std::to_string(kMaxTaps) + " taps");
  require(future_taps >= 0 && future_taps < taps, "wiener: need 0 <= future_taps < taps");
  require(ridge >= 0.0, "wiener: ridge must be >= 0");
}

namespace
{

// u_k[n] = zhat[n + future - k] (zero outside), the regressor of tap k.
double lagged(const Signal & z, Eigen::Index n, int future, int k)
{
  const Eigen::Index idx = n + future - k;
  return (idx >= 0 && idx < z.size()) ? z(idx) : 0.0;
}

// sum_n u_j[n] v[n] over n in [0, N) with u_j the lag of tap j.
double lagged_dot(const Signal & z, const Signal & v, int future, int j)
{
  const Eigen::Index n_len = v.size();
  const Eigen::Index shift = future - j;  // u_j[n] = z[n + shift]
  const Eigen::Index n0 = std::max<Eigen::Index>(0, -shift);
  const Eigen::Index n1 = std::min<Eigen::Index>(n_len, z.size() - shift);
  if (n1 <= n0) {
    return 0.0;
  }
  return z.segment(n0 + shift, n1 - n0).dot(v.segment(n0, n1 - n0));
}

}  // namespace

Signal apply_wiener(const Signal & h, const Signal & zhat, int future_taps)
{
  const Eigen::Index len = zhat.size();
  Signal out = Signal::Zero(len);
  for (Eigen::Index k = 0; k < h.size(); ++k) {
    const Eigen::Index shift = future_taps - k;
    const Eigen::Index n0 = std::max<Eigen::Index>(0, -shift);
    const Eigen::Index n1 = std::min<Eigen::Index>(len, len - shift);
    if (n1 > n0 && h(k) != 0.0) {
      out.segment(n0, n1 - n0) += h(k) * zhat.segment(n0 + shift, n1 - n0);
    }
  }
  return out;
}

WienerNormalEquations wiener_normal_equations(const Signal & zhat, const Signal & y, const WienerConfig & cfg)
{
  cfg.validate();
  require<GeometryError>(zhat.size() == y.size(), "wiener: signals differ in length");
  require(zhat.size() > 0, "wiener: empty signals");

  const int m = cfg.taps;
  const int fut = cfg.future_taps;
  const Eigen::Index n_len = zhat.size();
  WienerNormalEquations eq;
  eq.gram.resize(m, m);
  eq.rhs.resize(m);

  // First column directly, then the recursion
  //   R(j+1,k+1) = R(j,k) + u_j[-1] u_k[-1] - u_j[N-1] u_k[N-1].
  for (int j = 0; j < m; ++j) {
    eq.rhs(j) = lagged_dot(zhat, y, fut, j);
  }
  Eigen::VectorXd u0(n_len);
  for (Eigen::Index n = 0; n < n_len; ++n) {
    u0(n) = lagged(zhat, n, fut, 0);
  }
  for (int j = 0; j < m; ++j) {
    eq.gram(j, 0) = lagged_dot(zhat, u0, fut, j);
  }
  for (int k = 0; k + 1 < m; ++k) {
    for (int j = k; j + 1 < m; ++j) {
      eq.gram(j + 1, k + 1) = eq.gram(j, k) + lagged(zhat, -1, fut, j) * lagged(zhat, -1, fut, k) -
                              lagged(zhat, n_len - 1, fut, j) * lagged(zhat, n_len - 1, fut, k);
    }
  }
  eq.gram.triangularView<Eigen::StrictlyUpper>() = eq.gram.transpose().triangularView<Eigen::StrictlyUpper>();

  const double trace = eq.gram.trace();
  eq.gram.diagonal().array() += cfg.ridge * trace / m;
  return eq;
}

Signal estimate_wiener(const Signal & zhat, const Signal & y, const WienerConfig & cfg)
{
  require<DegenerateInputError>(zhat.squaredNorm() > 0.0, "wiener: zero estimate");
  const WienerNormalEquations eq = wiener_normal_equations(zhat, y, cfg);
  Eigen::LLT<Eigen::MatrixXd> llt(eq.gram);
  if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-13)) {
    throw NumericalError("wiener: singular normal equations; use ridge > 0");
  }
  return llt.solve(eq.rhs);
}

IrasResult iras(
  const MultiSignal & mixtures, const MultiSignal & zhats, const WienerConfig & cfg,
  const Eigen::VectorXd & alpha)
{
  require(!mixtures.empty() && !zhats.empty(), "iras: need mixtures and estimates");
  const Eigen::VectorXd a = alpha.size() == 0 ? Eigen::VectorXd::Ones(static_cast<Eigen::Index>(mixtures.size())) : alpha;
  require<GeometryError>(a.size() == static_cast<Eigen::Index>(mixtures.size()), "iras: one alpha per microphone");

  IrasResult r;
  r.per_mic.resize(a.size());
  for (std::size_t p = 0; p < mixtures.size(); ++p) {
    const Signal & y = mixtures[p];
    const double norm = y.lpNorm<1>();
    require<DegenerateInputError>(norm > 0.0, "iras: zero mixture");
    Signal sum = Signal::Zero(y.size());
    MultiSignal imgs;
    for (const auto & z : zhats) {
      require<GeometryError>(z.size() == y.size(), "iras: signals differ in length");
      const Signal h = estimate_wiener(z, y, cfg);
      imgs.push_back(apply_wiener(h, z, cfg.future_taps));
      sum += imgs.back();
    }
    r.per_mic(static_cast<Eigen::Index>(p)) = (y - sum).lpNorm<1>() / norm;
    r.images.push_back(std::move(imgs));
  }
  r.loss = a.dot(r.per_mic);
  return r;
}

double iras_loss(
  const MultiSignal & mixtures, const MultiSignal & zhats, const WienerConfig & cfg,
  const Eigen::VectorXd & alpha)
{
  return iras(mixtures, zhats, cfg, alpha).loss;
}

int taps_from_stft_filter(int stft_taps, int hop_ms, int win_ms, int sample_rate)
{
  require(stft_taps >= 1, "taps_from_stft_filter: K must be >= 1");
  require(hop_ms > 0 && win_ms > 0 && sample_rate > 0, "taps_from_stft_filter: positive durations required");
  const long long span_ms = static_cast<long long>(stft_taps - 1) * hop_ms + win_ms;
  return static_cast<int>(span_ms * sample_rate / 1000);
}

}  // namespace fcpsep
