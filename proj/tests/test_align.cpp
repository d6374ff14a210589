// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fcpsep/align.hpp"
#include "fcpsep/metrics.hpp"
#include "fcpsep/simkit.hpp"
#include "fcpsep/stft.hpp"

#include "helpers.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>

using namespace fcpsep;
using fcpsep::testing::gaussian_signal;
using fcpsep::testing::gaussian_spectrogram;

namespace
{

MultiSpectrogram scene_refs(std::uint64_t seed, int speakers = 2, int samples = 8000)
{
  SceneParams p;
  p.seed = seed;
  p.speakers = speakers;
  p.mics = 1;
  p.num_samples = samples;
  const SceneTruth t = render(random_scene(p));
  MultiSpectrogram refs;
  for (int c = 0; c < speakers; ++c) {
    refs.push_back(stft(t.images[c][0]));
  }
  return refs;
}

FrequencyPermutation random_permutation(int bins, int speakers, Rng & rng)
{
  FrequencyPermutation p = FrequencyPermutation::identity(bins, speakers);
  for (auto & row : p.perm) {
    std::shuffle(row.begin(), row.end(), rng);
  }
  return p;
}

// perm maps output label -> input; the inverse undoes a scramble.
FrequencyPermutation inverse(const FrequencyPermutation & p)
{
  FrequencyPermutation inv = p;
  for (std::size_t f = 0; f < p.perm.size(); ++f) {
    for (std::size_t c = 0; c < p.perm[f].size(); ++c) {
      inv.perm[f][p.perm[f][c]] = static_cast<int>(c);
    }
  }
  return inv;
}

}  // namespace

TEST_CASE("oracle alignment undoes an injected scramble")
{
  Rng rng(1);
  const MultiSpectrogram refs = scene_refs(1, 3);
  const FrequencyPermutation scramble = random_permutation(static_cast<int>(refs[0].cols()), 3, rng);
  const MultiSpectrogram scrambled = apply_permutation(refs, scramble);
  const AlignResult r = oracle_freq_align(scrambled, refs);
  CHECK(count_mismatches(r.perm, inverse(scramble)) == 0);
  for (int c = 0; c < 3; ++c) {
    CHECK(r.aligned[c] == refs[c]);
  }
  CHECK(oracle_freq_align(refs, refs).perm.is_identity());
}

TEST_CASE("oracle alignment under -10 dB perturbation")
{
  Rng rng(2);
  const MultiSpectrogram refs = scene_refs(2);
  const int bins = static_cast<int>(refs[0].cols());
  const FrequencyPermutation scramble = random_permutation(bins, 2, rng);
  MultiSpectrogram noisy = apply_permutation(refs, scramble);
  for (auto & s : noisy) {
    const Spectrogram n = gaussian_spectrogram(s.rows(), s.cols(), rng);
    s += std::sqrt(0.1 * s.squaredNorm() / n.squaredNorm()) * n;
  }
  const AlignResult r = oracle_freq_align(noisy, refs);
  CHECK(count_mismatches(r.perm, inverse(scramble)) <= bins / 20);
}

TEST_CASE("oracle alignment never raises the per-bin error", "[property]")
{
  Rng rng(3);
  const MultiSpectrogram refs = scene_refs(3);
  MultiSpectrogram est = {gaussian_spectrogram(refs[0].rows(), refs[0].cols(), rng), refs[0]};
  est[0] += refs[1];
  const AlignResult r = oracle_freq_align(est, refs);
  for (Eigen::Index f = 0; f < refs[0].cols(); ++f) {
    double before = 0.0;
    double after = 0.0;
    for (int c = 0; c < 2; ++c) {
      before += (est[c].col(f) - refs[c].col(f)).squaredNorm();
      after += (r.aligned[c].col(f) - refs[c].col(f)).squaredNorm();
    }
    CHECK(after <= before);
  }
}

TEST_CASE("correlation alignment repairs a band swap")
{
  for (std::uint64_t seed : {4u, 5u, 6u}) {
    const MultiSpectrogram refs = scene_refs(seed);
    const int bins = static_cast<int>(refs[0].cols());
    FrequencyPermutation swap = FrequencyPermutation::identity(bins, 2);
    for (int f = 40; f < 90; ++f) {
      swap.perm[f] = {1, 0};
    }
    const AlignResult r = corr_freq_align(apply_permutation(refs, swap));
    const AlignResult o = oracle_freq_align(apply_permutation(refs, swap), refs);
    CHECK(count_mismatches(r.perm, o.perm) == 0);
  }
}

TEST_CASE("correlation alignment keeps aligned input and is idempotent", "[property]")
{
  const MultiSpectrogram refs = scene_refs(7);
  CHECK(corr_freq_align(refs).perm.is_identity());
  Rng rng(7);
  const MultiSpectrogram scrambled = apply_permutation(refs, random_permutation(static_cast<int>(refs[0].cols()), 2, rng));
  const AlignResult once = corr_freq_align(scrambled);
  CHECK(corr_freq_align(once.aligned).perm.is_identity());
}

TEST_CASE("refinement sweeps never leave more misaligned bins than one sweep")
{
  Rng rng(8);
  for (std::uint64_t seed : {8u, 9u, 10u}) {
    const MultiSpectrogram refs = scene_refs(seed, 3);
    const MultiSpectrogram scrambled = apply_permutation(refs, random_permutation(static_cast<int>(refs[0].cols()), 3, rng));
    const FrequencyPermutation truth = oracle_freq_align(scrambled, refs).perm;
    CorrAlignOptions one;
    one.max_sweeps = 1;
    const int single = count_mismatches(
      oracle_freq_align(corr_freq_align(scrambled, one).aligned, refs).perm,
      FrequencyPermutation::identity(static_cast<int>(refs[0].cols()), 3));
    const int converged = count_mismatches(
      oracle_freq_align(corr_freq_align(scrambled).aligned, refs).perm,
      FrequencyPermutation::identity(static_cast<int>(refs[0].cols()), 3));
    CHECK(converged <= single);
    (void)truth;
  }
}

TEST_CASE("constant envelopes are flagged and left alone")
{
  const MultiSpectrogram flat = {Spectrogram::Constant(20, 9, Complex(1.0, 0.0)), Spectrogram::Constant(20, 9, Complex(0.0, 2.0))};
  const AlignResult r = corr_freq_align(flat);
  CHECK(r.perm.degenerate);
  CHECK(r.perm.is_identity());
  CHECK(r.aligned[1] == flat[1]);
}

TEST_CASE("alignment validation")
{
  Rng rng(9);
  const Spectrogram s = gaussian_spectrogram(10, 5, rng);
  CHECK_THROWS_AS(corr_freq_align({s}), ConfigError);
  CHECK_THROWS_AS(oracle_freq_align(MultiSpectrogram(9, s), MultiSpectrogram(9, s)), ConfigError);
  CHECK_THROWS_AS(oracle_freq_align({s, s}, {s}), GeometryError);
  FrequencyPermutation bad = FrequencyPermutation::identity(5, 2);
  bad.perm[2] = {0, 0};
  CHECK_THROWS_AS(apply_permutation({s, s}, bad), ConfigError);
}

TEST_CASE("pit recovers a shuffle at the metric ceiling")
{
  Rng rng(10);
  MultiSignal refs;
  for (int c = 0; c < 4; ++c) {
    refs.push_back(gaussian_signal(500, rng));
  }
  const MultiSignal est = {refs[2], refs[0], refs[3], refs[1]};
  const PitResult r = pit_speaker_permutation(est, refs);
  CHECK(r.perm == std::vector<int>{1, 3, 0, 2});
  CHECK(r.mean == kMetricCeilingDb);
}

TEST_CASE("pit swaps crossed estimates")
{
  Rng rng(11);
  const MultiSignal refs = {gaussian_signal(800, rng), gaussian_signal(800, rng)};
  const MultiSignal est = {
    Signal(refs[1] + 0.3 * gaussian_signal(800, rng)), Signal(refs[0] + 0.3 * gaussian_signal(800, rng))};
  CHECK(pit_speaker_permutation(est, refs).perm == std::vector<int>{1, 0});
}

TEST_CASE("pit optimum matches brute-force enumeration", "[property]")
{
  Rng rng(12);
  for (int speakers = 2; speakers <= 4; ++speakers) {
    MultiSignal refs;
    MultiSignal est;
    for (int c = 0; c < speakers; ++c) {
      refs.push_back(gaussian_signal(300, rng));
    }
    for (int c = 0; c < speakers; ++c) {
      est.push_back(refs[(c + 1) % speakers] * 0.5 + gaussian_signal(300, rng));
    }
    const PitResult r = pit_speaker_permutation(est, refs);
    std::vector<int> p(static_cast<std::size_t>(speakers));
    std::iota(p.begin(), p.end(), 0);
    do {
      double mean = 0.0;
      for (int c = 0; c < speakers; ++c) {
        mean += si_sdr(est[p[c]], refs[c]) / speakers;
      }
      CHECK(r.mean >= mean - 1e-12);
    } while (std::next_permutation(p.begin(), p.end()));
    for (int c = 0; c < speakers; ++c) {
      CHECK(r.values(c) == si_sdr(est[r.perm[c]], refs[c]));
    }
  }
  CHECK_THROWS_AS(pit_speaker_permutation({Signal::Ones(3)}, {Signal::Ones(4)}), GeometryError);
}

TEST_CASE("permutation csv")
{
  FrequencyPermutation p = FrequencyPermutation::identity(2, 3);
  p.perm[1] = {2, 0, 1};
  std::ostringstream os;
  write_permutation_csv(os, p);
  CHECK(os.str() == "f,perm\n0,0 1 2\n1,2 0 1\n");
}
