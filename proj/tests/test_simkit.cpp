// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fcpsep/fcp.hpp"
#include "fcpsep/simkit.hpp"
#include "fcpsep/stft.hpp"

#include "helpers.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace fcpsep;

TEST_CASE("unit-impulse RIR reproduces the dry source")
{
  SimScene s;
  s.speakers = 1;
  s.mics = 1;
  Rng rng(3);
  s.dry = {fcpsep::testing::gaussian_signal(400, rng)};
  s.rirs = {{Signal::Ones(1)}};
  const SceneTruth t = render(s);
  CHECK(t.images[0][0] == s.dry[0]);
  CHECK(t.mixtures[0] == s.dry[0]);
  CHECK(t.noise[0].isZero(0.0));
}

TEST_CASE("noiseless mixtures are exact sums of images")
{
  SceneParams p;
  p.speakers = 2;
  p.mics = 2;
  p.seed = 5;
  p.num_samples = 3000;
  const SceneTruth t = render(random_scene(p));
  for (int m = 0; m < 2; ++m) {
    CHECK(t.mixtures[m] == t.images[0][m] + t.images[1][m]);
  }
  // Additivity carries over to the STFT domain.
  const Spectrogram lhs = stft(t.mixtures[1]);
  const Spectrogram rhs = stft(t.images[0][1]) + stft(t.images[1][1]);
  CHECK((lhs - rhs).norm() <= 1e-10 * rhs.norm());
}

TEST_CASE("render convolves with every RIR")
{
  SimScene s;
  s.speakers = 1;
  s.mics = 1;
  s.dry = {Signal::LinSpaced(6, 1.0, 6.0)};
  Signal h(3);
  h << 1.0, -1.0, 0.5;
  s.rirs = {{h}};
  const SceneTruth t = render(s);
  Signal expected(8);
  expected << 1.0, 1.0, 1.5, 2.0, 2.5, 3.0, -3.5, 3.0;
  CHECK((t.images[0][0] - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("noise hits the requested SNR")
{
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    SceneParams p;
    p.seed = seed;
    p.mics = 3;
    p.noise_snr_db = 25.0;
    const SceneTruth t = render(random_scene(p));
    for (int m = 0; m < t.mics(); ++m) {
      const Signal clean = t.images[0][m] + t.images[1][m];
      const double snr = 10.0 * std::log10(clean.squaredNorm() / t.noise[m].squaredNorm());
      CHECK(std::abs(snr - 25.0) < 0.1);
      CHECK((t.mixtures[m] - clean - t.noise[m]).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("zero decay and one tap give an anechoic scene")
{
  SceneParams p;
  p.decay_ms = 0.0;
  p.rir_len = 1;
  const SimScene s = random_scene(p);
  for (const auto & per_mic : s.rirs) {
    for (const auto & h : per_mic) {
      CHECK(h.size() == 1);
      CHECK(h(0) != 0.0);
    }
  }
}

TEST_CASE("same seed gives the same scene")
{
  SceneParams p;
  p.seed = 77;
  const SimScene a = random_scene(p);
  const SimScene b = random_scene(p);
  for (int c = 0; c < a.speakers; ++c) {
    CHECK(a.dry[c] == b.dry[c]);
    for (int m = 0; m < a.mics; ++m) {
      CHECK(a.rirs[c][m] == b.rirs[c][m]);
    }
  }
  p.seed = 78;
  CHECK(random_scene(p).dry[0] != a.dry[0]);
}

TEST_CASE("RIR envelope falls 60 dB over three decay spans")
{
  // Envelope 10^(-n / decay) with decay = decay_ms * fs / 1000 samples, so
  // 60 dB (a factor 1e-3 in amplitude) is reached at n = 3 * decay.
  SceneParams p;
  p.decay_ms = 100.0;
  p.rir_len = 4000;
  p.max_delay = 0;
  p.speakers = 1;
  p.mics = 40;
  const SimScene s = random_scene(p);
  const double decay = 800.0;
  auto band_rms = [&](int from) {
    double acc = 0.0;
    int n = 0;
    for (const auto & h : s.rirs[0]) {
      for (int i = from; i < from + 100; ++i) {
        acc += h(i) * h(i) * std::pow(10.0, 2.0 * i / decay);
        ++n;
      }
    }
    return std::sqrt(acc / n);
  };
  // With the envelope divided out, early and late bands have equal RMS.
  CHECK(band_rms(2350) / band_rms(50) == Catch::Approx(1.0).epsilon(0.15));
  const int n60 = static_cast<int>(std::lround(3.0 * decay));
  CHECK(n60 == 2400);
  CHECK(std::pow(10.0, -n60 / decay) == Catch::Approx(1e-3));
}

TEST_CASE("direct path lies within max_delay")
{
  SceneParams p;
  p.max_delay = 5;
  p.mics = 6;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    p.seed = seed;
    const SimScene s = random_scene(p);
    for (const auto & per_mic : s.rirs) {
      for (const auto & h : per_mic) {
        CHECK(h.head(6).cwiseAbs().maxCoeff() > 0.5);
      }
    }
  }
}

TEST_CASE("oracle filter from a mic to itself is the identity")
{
  SceneParams p;
  p.seed = 9;
  p.speakers = 1;
  const SceneTruth t = render(random_scene(p));
  const RelativeFilter g = oracle_relative_rir(t.images[0][0], t.images[0][0], 0, 0);
  CHECK((g.coeffs.array() - Complex(1.0, 0.0)).abs().maxCoeff() < 1e-9);
}

TEST_CASE("a one-hop delay puts the dominant tap at lag one")
{
  Rng rng(21);
  const Signal x = fcpsep::testing::gaussian_signal(4000, rng);
  Signal y = Signal::Zero(4000);
  y.tail(4000 - 64) = x.head(4000 - 64);
  const RelativeFilter g = oracle_relative_rir(x, y, 3, 1);
  for (int f = 0; f < g.bins(); ++f) {
    Eigen::Index k = 0;
    g.coeffs.row(f).cwiseAbs().maxCoeff(&k);
    CHECK(k == g.index_of_lag(1));
  }
}

TEST_CASE("oracle filter reproduces the target image when it covers the support")
{
  SceneParams p;
  p.seed = 4;
  p.speakers = 1;
  p.relative_taps = 3;
  p.rir_len = 128;
  p.decay_ms = 10.0;
  const SceneTruth t = render(random_scene(p));
  const RelativeFilter g = oracle_relative_rir(t.images[0][0], t.images[0][2], 4, 0);
  const Spectrogram target = stft(t.images[0][2]);
  const Spectrogram fit = fcp_image(stft(t.images[0][0]), g);
  const double residual_db = 10.0 * std::log10((target - fit).squaredNorm() / target.squaredNorm());
  CHECK(residual_db < -40.0);
}

TEST_CASE("unknown counts")
{
  const UnknownCount u = count_unknowns(100, 129, 6, 2, 20);
  CHECK(u.equations == 100LL * 129 * 6);
  CHECK(u.unconstrained_unknowns == 100LL * 129 * 6 * 2);
  CHECK(u.constrained_unknowns == 100LL * 129 * 2 + 129LL * 5 * 20 * 2);
  CHECK(u.overdetermined());
  CHECK_FALSE(count_unknowns(100, 129, 2, 2, 20).overdetermined());
}

TEST_CASE("scene validation")
{
  SceneParams p;
  p.mics = 0;
  CHECK_THROWS_AS(random_scene(p), ConfigError);
  p.mics = 2;
  p.rir_len = 0;
  CHECK_THROWS_AS(random_scene(p), ConfigError);
  SimScene s;
  s.speakers = 1;
  s.mics = 1;
  s.dry = {Signal(0)};
  s.rirs = {{Signal::Ones(1)}};
  CHECK_THROWS_AS(render(s), ConfigError);
  s.dry = {Signal::Ones(3)};
  s.rirs = {{Signal(0)}};
  CHECK_THROWS_AS(render(s), ConfigError);
}
