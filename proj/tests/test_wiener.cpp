// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fcpsep/simkit.hpp"
#include "fcpsep/wiener.hpp"

#include "helpers.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

using namespace fcpsep;
using fcpsep::testing::gaussian_signal;

namespace
{

double residual_energy(const Signal & zhat, const Signal & y, const WienerConfig & cfg)
{
  const Signal h = estimate_wiener(zhat, y, cfg);
  return (y - apply_wiener(h, zhat, cfg.future_taps)).squaredNorm();
}

}  // namespace

TEST_CASE("tap mapping from sub-band filter length")
{
  CHECK(taps_from_stft_filter(13) == 1024);
  CHECK(taps_from_stft_filter(1) == 256);
  CHECK(taps_from_stft_filter(20) == 1472);
}

TEST_CASE("identity filter")
{
  Rng rng(1);
  const Signal z = gaussian_signal(500, rng);
  WienerConfig cfg;
  cfg.taps = 1;
  cfg.future_taps = 0;
  const Signal h = estimate_wiener(z, z, cfg);
  REQUIRE(h.size() == 1);
  CHECK(h(0) == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a pure delay is found at its tap")
{
  Rng rng(2);
  const Signal z = gaussian_signal(4000, rng);
  Signal y = Signal::Zero(4000);
  y.tail(3995) = z.head(3995);
  WienerConfig cfg;
  cfg.taps = 16;
  cfg.future_taps = 0;
  const Signal h = estimate_wiener(z, y, cfg);
  Eigen::Index k = 0;
  h.cwiseAbs().maxCoeff(&k);
  CHECK(k == 5);
  const double res = (y - apply_wiener(h, z, 0)).squaredNorm() / y.squaredNorm();
  CHECK(10.0 * std::log10(res) < -60.0);
}

TEST_CASE("look-ahead taps reach future samples")
{
  Rng rng(3);
  const Signal z = gaussian_signal(3000, rng);
  Signal y = Signal::Zero(3000);
  y.head(2997) = z.tail(2997);  // y[n] = z[n + 3]
  WienerConfig cfg;
  cfg.taps = 12;
  cfg.future_taps = 4;
  const Signal h = estimate_wiener(z, y, cfg);
  Eigen::Index k = 0;
  h.cwiseAbs().maxCoeff(&k);
  CHECK(k == cfg.future_taps - 3);
}

TEST_CASE("independent noise is barely predictable")
{
  Rng rng(4);
  const Signal z = gaussian_signal(8000, rng);
  const Signal y = gaussian_signal(8000, rng);
  WienerConfig cfg;
  const Signal h = estimate_wiener(z, y, cfg);
  CHECK(apply_wiener(h, z, cfg.future_taps).squaredNorm() / y.squaredNorm() < 0.2);
}

TEST_CASE("residual is orthogonal to every lagged input", "[property]")
{
  Rng rng(5);
  const Signal z = gaussian_signal(3000, rng);
  Signal y = gaussian_signal(3000, rng);
  y.tail(2990) += 0.8 * z.head(2990);
  WienerConfig cfg;
  cfg.taps = 64;
  cfg.future_taps = 10;
  const Signal h = estimate_wiener(z, y, cfg);
  const Signal r = y - apply_wiener(h, z, cfg.future_taps);
  const Eigen::Index n = z.size();
  for (int k = 0; k < cfg.taps; ++k) {
    Signal u = Signal::Zero(n);  // u[m] = z[m + future - k]
    const int shift = cfg.future_taps - k;
    for (Eigen::Index m = 0; m < n; ++m) {
      const Eigen::Index src = m + shift;
      if (src >= 0 && src < n) {
        u(m) = z(src);
      }
    }
    CHECK(std::abs(r.dot(u)) < 1e-8 * r.norm() * u.norm());
  }
}

TEST_CASE("normal equations match the explicit lagged design")
{
  Rng rng(6);
  const Signal z = gaussian_signal(400, rng);
  const Signal y = gaussian_signal(400, rng);
  WienerConfig cfg;
  cfg.taps = 20;
  cfg.future_taps = 5;
  const WienerNormalEquations eq = wiener_normal_equations(z, y, cfg);
  Eigen::MatrixXd design = Eigen::MatrixXd::Zero(400, 20);
  for (int k = 0; k < 20; ++k) {
    for (int m = 0; m < 400; ++m) {
      const int src = m + 5 - k;
      if (src >= 0 && src < 400) {
        design(m, k) = z(src);
      }
    }
  }
  CHECK((eq.gram - design.transpose() * design).norm() < 1e-10 * eq.gram.norm());
  CHECK((eq.rhs - design.transpose() * y).norm() < 1e-10 * eq.rhs.norm());
}

TEST_CASE("longer filters never fit worse", "[property]")
{
  const SceneTruth t = render(random_scene(SceneParams{}));
  WienerConfig cfg;
  cfg.future_taps = 32;
  double previous = std::numeric_limits<double>::infinity();
  for (int taps : {64, 128, 256, 512}) {
    cfg.taps = taps;
    const double e = residual_energy(t.images[0][0], t.mixtures[1], cfg);
    CHECK(e <= previous * (1.0 + 1e-12));
    previous = e;
  }
}

namespace
{

MultiSignal padded_dry(const SimScene & scene, std::size_t len)
{
  MultiSignal out;
  for (const auto & d : scene.dry) {
    Signal s = Signal::Zero(static_cast<Eigen::Index>(len));
    s.head(d.size()) = d;
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("iras loss cases")
{
  WienerConfig cfg;
  cfg.taps = 128;
  cfg.future_taps = 0;

  // Dry sources with taps covering the RIRs. Each filter is fitted against
  // the whole mixture, so the other speaker leaks in; the leak averages out.
  double previous = std::numeric_limits<double>::infinity();
  for (int samples : {4000, 16000}) {
    SceneParams p;
    p.mics = 3;
    p.rir_len = 64;
    p.num_samples = samples;
    const SimScene scene = random_scene(p);
    const SceneTruth t = render(scene);
    const MultiSignal dry = padded_dry(scene, t.length());
    const IrasResult r = iras(t.mixtures, dry, cfg);
    CHECK(r.loss < previous);
    previous = r.loss;
    REQUIRE(r.per_mic.size() == 3);
    CHECK(r.images.size() == 3);
    CHECK(r.images[0].size() == 2);

    Eigen::VectorXd alpha(3);
    alpha << 2.0, 0.0, 0.0;
    CHECK(iras_loss(t.mixtures, dry, cfg, alpha) == Catch::Approx(2.0 * r.per_mic(0)));

    if (samples == 16000) {
      WienerConfig longer = cfg;
      longer.taps = 512;
      longer.future_taps = 100;
      const double merged = iras_loss(t.mixtures, {t.mixtures[0]}, longer);
      CHECK(r.loss < 0.4);
      CHECK(r.loss < 0.5 * merged);
    }
  }

  // One speaker alone is explained exactly, and each mixture predicts itself.
  SceneParams one;
  one.speakers = 1;
  one.mics = 3;
  one.rir_len = 64;
  one.num_samples = 4000;
  const SimScene solo = random_scene(one);
  const SceneTruth ts = render(solo);
  CHECK(iras_loss(ts.mixtures, padded_dry(solo, ts.length()), cfg) < 1e-8);
  for (int m = 0; m < 3; ++m) {
    CHECK(iras_loss({ts.mixtures[m]}, {ts.mixtures[m]}, cfg) < 1e-6);
  }
  CHECK_THROWS_AS(iras_loss({Signal::Zero(100)}, {Signal::Ones(100)}, cfg), DegenerateInputError);
}

TEST_CASE("singular systems need a ridge")
{
  WienerConfig cfg;
  cfg.taps = 64;
  cfg.future_taps = 0;
  // An impulse in the last sample leaves every lagged copy but one empty.
  Signal last = Signal::Zero(300);
  last(299) = 1.0;
  const Signal y = Signal::Ones(300);
  CHECK_THROWS_AS(estimate_wiener(last, y, cfg), NumericalError);
  cfg.ridge = 1e-6;
  CHECK(estimate_wiener(last, y, cfg).allFinite());
  CHECK_THROWS_AS(estimate_wiener(Signal::Zero(300), y, cfg), DegenerateInputError);
}

TEST_CASE("wiener validation")
{
  WienerConfig cfg;
  cfg.future_taps = cfg.taps;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.future_taps = 0;
  cfg.taps = WienerConfig::kMaxTaps + 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.taps = 8;
  CHECK_THROWS_AS(estimate_wiener(Signal::Ones(10), Signal::Ones(11), cfg), GeometryError);
}
