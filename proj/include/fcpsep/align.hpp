// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FCPSEP_ALIGN_HPP_
#define FCPSEP_ALIGN_HPP_

#include "fcpsep/core.hpp"

#include <functional>
#include <ostream>
#include <vector>

namespace fcpsep
{

/// perm[f][c] is the input estimate placed at output label c in bin f.
struct FrequencyPermutation
{
  std::vector<std::vector<int>> perm;
  bool degenerate = false;  // set when the envelopes carried no information

  static FrequencyPermutation identity(int bins, int speakers);
  bool is_identity() const;
  int bins() const { return static_cast<int>(perm.size()); }
};

struct AlignResult
{
  MultiSpectrogram aligned;
  FrequencyPermutation perm;
};

MultiSpectrogram apply_permutation(const MultiSpectrogram & estimates, const FrequencyPermutation & perm);

/// Per bin, the labelling minimising sum_{t,c} |est - ref|^2. C <= 8.
AlignResult oracle_freq_align(const MultiSpectrogram & estimates, const MultiSpectrogram & references);

struct CorrAlignOptions
{
  int max_sweeps = 10;  // refinement sweeps after the ascending pass
};

/// Greedy alignment on log-magnitude envelopes (floor 1e-8), compared across
/// bins by Pearson correlation over frames.
///
/// The lowest max(2, (F - 1) / 16) bins are taken as labelled and seed the
/// per-speaker centroids. An ascending pass then labels each remaining bin
/// by the permutation with the largest summed correlation against the
/// centroids, adding it to them. Refinement sweeps relabel every non-seed bin
/// against leave-one-out centroids until nothing changes. The result is kept
/// only if it scores higher than leaving the input as is.
AlignResult corr_freq_align(const MultiSpectrogram & estimates, const CorrAlignOptions & opt = {});

/// Number of bins whose labelling differs between two permutations.
int count_mismatches(const FrequencyPermutation & a, const FrequencyPermutation & b);

using PairMetric = std::function<double(const Signal & est, const Signal & ref)>;

struct PitResult
{
  std::vector<int> perm;  // perm[c]: estimate assigned to reference c
  Eigen::VectorXd values;  // metric(est[perm[c]], ref[c])
  double mean = 0.0;
};

/// Exhaustive search over the C! assignments maximising the mean metric
/// (SI-SDR when `metric` is empty). C <= 8.
PitResult pit_speaker_permutation(
  const MultiSignal & estimates, const MultiSignal & references, const PairMetric & metric = {});

/// `f,perm` with perm written as space-separated zero-based labels.
void write_permutation_csv(std::ostream & os, const FrequencyPermutation & perm);

}  // namespace fcpsep

#endif  // FCPSEP_ALIGN_HPP_
