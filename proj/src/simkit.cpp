// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fcpsep/simkit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fcpsep
{

void SimScene::validate() const
{
  require(speakers >= 1, "scene: need at least one speaker");
  require(mics >= 1, "scene: need at least one microphone");
  require(sample_rate > 0, "scene: sample_rate must be positive");
  require<GeometryError>(static_cast<int>(dry.size()) == speakers, "scene: one dry signal per speaker");
  require<GeometryError>(static_cast<int>(rirs.size()) == speakers, "scene: one RIR set per speaker");
  for (int c = 0; c < speakers; ++c) {
    require(dry[c].size() > 0, "scene: empty dry source");
    require<GeometryError>(dry[c].size() == dry.front().size(), "scene: dry sources differ in length");
    require<GeometryError>(static_cast<int>(rirs[c].size()) == mics, "scene: one RIR per microphone");
    for (const auto & h : rirs[c]) {
      require(h.size() > 0, "scene: zero-length RIR");
    }
  }
}

namespace
{

Signal convolve_full(const Signal & x, const Signal & h, Eigen::Index out_len)
{
  Signal y = Signal::Zero(out_len);
  for (Eigen::Index k = 0; k < h.size(); ++k) {
    if (h(k) != 0.0) {
      y.segment(k, x.size()) += h(k) * x;
    }
  }
  return y;
}

}  // namespace

SceneTruth render(const SimScene & scene)
{
  scene.validate();

  Eigen::Index max_rir = 0;
  for (const auto & per_mic : scene.rirs) {
    for (const auto & h : per_mic) {
      max_rir = std::max(max_rir, h.size());
    }
  }
  const Eigen::Index len = scene.dry.front().size() + max_rir - 1;

  SceneTruth truth;
  truth.sample_rate = scene.sample_rate;
  truth.images.resize(static_cast<std::size_t>(scene.speakers));
  for (int c = 0; c < scene.speakers; ++c) {
    for (int p = 0; p < scene.mics; ++p) {
      truth.images[c].push_back(convolve_full(scene.dry[c], scene.rirs[c][p], len));
    }
  }

  Rng rng = SeedSplitter(scene.seed).stream("noise");
  std::normal_distribution<double> normal;
  for (int p = 0; p < scene.mics; ++p) {
    Signal clean = Signal::Zero(len);
    for (int c = 0; c < scene.speakers; ++c) {
      clean += truth.images[c][p];
    }
    Signal noise = Signal::Zero(len);
    if (scene.noise_snr_db) {
      for (Eigen::Index n = 0; n < len; ++n) {
        noise(n) = normal(rng);
      }
      const double clean_energy = clean.squaredNorm();
      const double noise_energy = noise.squaredNorm();
      if (clean_energy > 0.0 && noise_energy > 0.0) {
        const double target = clean_energy / std::pow(10.0, *scene.noise_snr_db / 10.0);
        noise *= std::sqrt(target / noise_energy);
      } else {
        noise.setZero();
      }
    }
    truth.mixtures.push_back(clean + noise);
    truth.noise.push_back(std::move(noise));
  }
  return truth;
}

void SceneParams::validate() const
{
  require(speakers >= 1, "random_scene: speakers must be >= 1");
  require(mics >= 1, "random_scene: mics must be >= 1");
  require(sample_rate > 0, "random_scene: sample_rate must be positive");
  require(dry_override.empty() ? num_samples >= 1 : true, "random_scene: num_samples must be >= 1");
  require(rir_len >= 1, "random_scene: rir_len must be >= 1");
  require(decay_ms >= 0.0, "random_scene: decay_ms must be >= 0");
  require(max_delay >= 0, "random_scene: max_delay must be >= 0");
  require(relative_taps >= 0, "random_scene: relative_taps must be >= 0");
  require(relative_spacing >= 1, "random_scene: relative_spacing must be >= 1");
}

Signal modulated_noise(int num_samples, int sample_rate, Rng & rng)
{
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;

  // Spectral tilt: first-order recursive lowpass with a per-source pole.
  const double pole = 0.3 + 0.6 * uniform(rng);
  Signal carrier(num_samples);
  double state = 0.0;
  for (int n = 0; n < num_samples; ++n) {
    state = pole * state + normal(rng);
    carrier(n) = state;
  }

  // Syllable-like gating: 50-250 ms segments, on with probability 0.6.
  Signal gate(num_samples);
  const int min_seg = std::max(1, sample_rate / 20);
  const int max_seg = std::max(min_seg, sample_rate / 4);
  int n = 0;
  while (n < num_samples) {
    const int seg = min_seg + static_cast<int>(uniform(rng) * (max_seg - min_seg));
    const bool on = uniform(rng) < 0.6;
    const double level = on ? std::exp(0.5 * normal(rng)) : 0.03;
    for (int i = 0; i < seg && n < num_samples; ++i, ++n) {
      gate(n) = level;
    }
  }
  // 10 ms moving average to soften the gate edges.
  const int smooth = std::max(1, sample_rate / 100);
  Signal env(num_samples);
  double acc = 0.0;
  for (int i = 0; i < num_samples; ++i) {
    acc += gate(i);
    if (i >= smooth) {
      acc -= gate(i - smooth);
    }
    env(i) = acc / std::min(i + 1, smooth);
  }

  Signal s = carrier.cwiseProduct(env);
  const double rms = std::sqrt(s.squaredNorm() / num_samples);
  if (rms > 0.0) {
    s /= rms;
  }
  return s;
}

namespace
{

// Direct path at `delay` followed by a decaying Gaussian tail.
Signal random_rir(int len, int delay, double decay_samples, Rng & rng)
{
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;
  Signal h = Signal::Zero(len);
  h(delay) = 0.7 + 0.6 * uniform(rng);
  if (decay_samples > 0.0) {
    for (int n = delay + 1; n < len; ++n) {
      h(n) = 0.3 * normal(rng) * std::pow(10.0, -(n - delay) / decay_samples);
    }
  }
  return h;
}

}  // namespace

SimScene random_scene(const SceneParams & params)
{
  params.validate();
  const SeedSplitter seeds(params.seed);

  SimScene scene;
  scene.speakers = params.dry_override.empty() ? params.speakers : static_cast<int>(params.dry_override.size());
  scene.mics = params.mics;
  scene.sample_rate = params.sample_rate;
  scene.noise_snr_db = params.noise_snr_db;
  scene.seed = params.seed;

  const double decay = params.decay_ms * params.sample_rate / 1000.0;
  const int max_delay = std::min(params.max_delay, params.rir_len - 1);

  for (int c = 0; c < scene.speakers; ++c) {
    const std::string tag = std::to_string(c);
    if (params.dry_override.empty()) {
      Rng rng = seeds.stream("dry/" + tag);
      scene.dry.push_back(modulated_noise(params.num_samples, params.sample_rate, rng));
    } else {
      scene.dry.push_back(params.dry_override[c]);
    }

    Rng rng = seeds.stream("rir/" + tag);
    std::uniform_int_distribution<int> delay_dist(0, max_delay);
    MultiSignal per_mic;
    if (params.relative_taps == 0) {
      for (int p = 0; p < scene.mics; ++p) {
        per_mic.push_back(random_rir(params.rir_len, delay_dist(rng), decay, rng));
      }
    } else {
      const Signal ref = random_rir(params.rir_len, delay_dist(rng), decay, rng);
      const int spacing = params.relative_spacing;
      const int len = params.rir_len + (params.relative_taps - 1) * spacing;
      std::normal_distribution<double> normal;
      std::uniform_real_distribution<double> uniform;
      for (int p = 0; p < scene.mics; ++p) {
        Signal h = Signal::Zero(len);
        if (p == 0) {
          h.head(params.rir_len) = ref;
        } else {
          for (int q = 0; q < params.relative_taps; ++q) {
            const double u = q == 0 ? (0.6 + 0.6 * uniform(rng)) * (uniform(rng) < 0.5 ? -1.0 : 1.0)
                                    : 0.4 * normal(rng) * (decay > 0.0 ? std::pow(10.0, -q * spacing / decay) : 0.0);
            h.segment(q * spacing, params.rir_len) += u * ref;
          }
        }
        per_mic.push_back(std::move(h));
      }
    }
    scene.rirs.push_back(std::move(per_mic));
  }
  return scene;
}

RelativeFilter oracle_relative_rir(
  const Signal & ref_image, const Signal & target_image, int past, int future, const StftConfig & cfg)
{
  require(past >= 0 && future >= 0, "oracle_relative_rir: taps must be >= 0");
  require<GeometryError>(
    ref_image.size() == target_image.size(), "oracle_relative_rir: images differ in length");
  require<DegenerateInputError>(
    ref_image.squaredNorm() > 0.0 && target_image.squaredNorm() > 0.0,
    "oracle_relative_rir: images must be nonzero");

  const Spectrogram x_ref = stft(ref_image, cfg);
  const Spectrogram x_tgt = stft(target_image, cfg);
  const int frames = static_cast<int>(x_ref.rows());
  const int taps = past + 1 + future;

  RelativeFilter g;
  g.past = past;
  g.future = future;
  g.coeffs.resize(x_ref.cols(), taps);
  Eigen::MatrixXcd design(frames, taps);
  for (int f = 0; f < x_ref.cols(); ++f) {
    design.setZero();
    for (int t = 0; t < frames; ++t) {
      for (int k = 0; k < taps; ++k) {
        const int src = t - past + k;
        if (src >= 0 && src < frames) {
          design(t, k) = x_ref(src, f);
        }
      }
    }
    const Eigen::VectorXcd c = design.completeOrthogonalDecomposition().solve(x_tgt.col(f));
    g.coeffs.row(f) = c.conjugate().transpose();
  }
  return g;
}

UnknownCount count_unknowns(long long frames, long long bins, long long mics, long long speakers, long long filter_taps)
{
  UnknownCount u;
  u.equations = frames * bins * mics;
  u.unconstrained_unknowns = frames * bins * mics * speakers;
  u.constrained_unknowns = frames * bins * speakers + bins * (mics - 1) * filter_taps * speakers;
  return u;
}

}  // namespace fcpsep
