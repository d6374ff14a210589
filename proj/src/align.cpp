// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fcpsep/align.hpp"

#include "fcpsep/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <locale>
#include <numeric>

namespace fcpsep
{

namespace
{

constexpr int kMaxSearchSpeakers = 8;

std::vector<int> iota_perm(int n)
{
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  return p;
}

// Every permutation of 0..n-1 in lexicographic order, identity first.
std::vector<std::vector<int>> all_permutations(int n)
{
  std::vector<std::vector<int>> out;
  std::vector<int> p = iota_perm(n);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace

FrequencyPermutation FrequencyPermutation::identity(int bins, int speakers)
{
  FrequencyPermutation p;
  p.perm.assign(static_cast<std::size_t>(bins), iota_perm(speakers));
  return p;
}

bool FrequencyPermutation::is_identity() const
{
  for (const auto & row : perm) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c] != static_cast<int>(c)) {
        return false;
      }
    }
  }
  return true;
}

MultiSpectrogram apply_permutation(const MultiSpectrogram & estimates, const FrequencyPermutation & perm)
{
  require_uniform_geometry(estimates, "apply_permutation");
  require<GeometryError>(perm.bins() == estimates.front().cols(), "apply_permutation: bin count differs");
  MultiSpectrogram out(estimates.size());
  for (std::size_t c = 0; c < estimates.size(); ++c) {
    out[c].resize(estimates.front().rows(), estimates.front().cols());
  }
  for (int f = 0; f < perm.bins(); ++f) {
    const auto & row = perm.perm[f];
    require<GeometryError>(row.size() == estimates.size(), "apply_permutation: wrong permutation size");
    std::vector<int> sorted = row;
    std::sort(sorted.begin(), sorted.end());
    require(sorted == iota_perm(static_cast<int>(row.size())), "apply_permutation: not a permutation");
    for (std::size_t c = 0; c < row.size(); ++c) {
      out[c].col(f) = estimates[row[c]].col(f);
    }
  }
  return out;
}

AlignResult oracle_freq_align(const MultiSpectrogram & estimates, const MultiSpectrogram & references)
{
  require_uniform_geometry(estimates, "oracle_freq_align (estimates)");
  require_uniform_geometry(references, "oracle_freq_align (references)");
  require_same_geometry(estimates.front(), references.front(), "oracle_freq_align");
  const int speakers = static_cast<int>(estimates.size());
  require<GeometryError>(
    speakers == static_cast<int>(references.size()), "oracle_freq_align: one reference per estimate");
  require(speakers <= kMaxSearchSpeakers, "oracle_freq_align: at most 8 speakers");

  const int bins = static_cast<int>(estimates.front().cols());
  const auto perms = all_permutations(speakers);
  AlignResult r;
  r.perm = FrequencyPermutation::identity(bins, speakers);
  Eigen::MatrixXd cost(speakers, speakers);  // cost(out label, input estimate)
  for (int f = 0; f < bins; ++f) {
    for (int c = 0; c < speakers; ++c) {
      for (int e = 0; e < speakers; ++e) {
        cost(c, e) = (estimates[e].col(f) - references[c].col(f)).squaredNorm();
      }
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto & p : perms) {
      double s = 0.0;
      for (int c = 0; c < speakers; ++c) {
        s += cost(c, p[c]);
      }
      if (s < best) {
        best = s;
        r.perm.perm[f] = p;
      }
    }
  }
  r.aligned = apply_permutation(estimates, r.perm);
  return r;
}

namespace
{

// Zero-mean, unit-norm log-magnitude envelope of every (estimate, bin);
// constant envelopes stay zero.
std::vector<Eigen::MatrixXd> normalized_envelopes(const MultiSpectrogram & estimates)
{
  std::vector<Eigen::MatrixXd> env;
  for (const auto & x : estimates) {
    Eigen::MatrixXd e = x.cwiseAbs().array().max(1e-8).log().matrix();
    e.rowwise() -= e.colwise().mean();
    for (Eigen::Index f = 0; f < e.cols(); ++f) {
      const double norm = e.col(f).norm();
      if (norm > 1e-12 * std::sqrt(static_cast<double>(e.rows()))) {
        e.col(f) /= norm;
      } else {
        e.col(f).setZero();
      }
    }
    env.push_back(std::move(e));
  }
  return env;
}

class CorrAligner
{
public:
  CorrAligner(const MultiSpectrogram & estimates)
    : env_(normalized_envelopes(estimates)),
      speakers_(static_cast<int>(estimates.size())),
      bins_(static_cast<int>(estimates.front().cols())),
      frames_(static_cast<int>(estimates.front().rows())),
      perms_(all_permutations(speakers_))
  {
  }

  int seed_bins() const { return std::min(bins_, std::max(2, (bins_ - 1) / 16)); }

  bool degenerate() const
  {
    for (const auto & e : env_) {
      if (!e.isZero(0.0)) {
        return false;
      }
    }
    return true;
  }

  // Summed Pearson correlation of labelling `p` at bin f with the centroids.
  double score(int f, const std::vector<int> & p, const Eigen::MatrixXd & centroids) const
  {
    double s = 0.0;
    for (int c = 0; c < speakers_; ++c) {
      const double norm = centroids.col(c).norm();
      if (norm > 0.0) {
        s += env_[p[c]].col(f).dot(centroids.col(c)) / norm;
      }
    }
    return s;
  }

  void add(int f, const std::vector<int> & p, Eigen::MatrixXd & centroids, double sign) const
  {
    for (int c = 0; c < speakers_; ++c) {
      centroids.col(c) += sign * env_[p[c]].col(f);
    }
  }

  // Best labelling at f; keeps `current` unless another is strictly better.
  const std::vector<int> & best(int f, const std::vector<int> & current, const Eigen::MatrixXd & centroids) const
  {
    const std::vector<int> * choice = &current;
    double top = score(f, current, centroids);
    for (const auto & p : perms_) {
      const double s = score(f, p, centroids);
      if (s > top + 1e-12) {
        top = s;
        choice = &p;
      }
    }
    return *choice;
  }

  Eigen::MatrixXd centroids(const FrequencyPermutation & fp) const
  {
    Eigen::MatrixXd cent = Eigen::MatrixXd::Zero(frames_, speakers_);
    for (int f = 0; f < bins_; ++f) {
      add(f, fp.perm[f], cent, 1.0);
    }
    return cent;
  }

  // Sum over bins of the leave-one-out correlation score.
  double total_score(const FrequencyPermutation & fp) const
  {
    Eigen::MatrixXd cent = centroids(fp);
    double s = 0.0;
    for (int f = 0; f < bins_; ++f) {
      add(f, fp.perm[f], cent, -1.0);
      s += score(f, fp.perm[f], cent);
      add(f, fp.perm[f], cent, 1.0);
    }
    return s;
  }

  FrequencyPermutation run(int max_sweeps) const
  {
    FrequencyPermutation fp = FrequencyPermutation::identity(bins_, speakers_);
    Eigen::MatrixXd cent = Eigen::MatrixXd::Zero(frames_, speakers_);
    const int seed = seed_bins();
    for (int f = 0; f < seed; ++f) {
      add(f, fp.perm[f], cent, 1.0);
    }
    for (int f = seed; f < bins_; ++f) {
      fp.perm[f] = best(f, fp.perm[f], cent);
      add(f, fp.perm[f], cent, 1.0);
    }
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      bool changed = false;
      for (int f = seed; f < bins_; ++f) {
        add(f, fp.perm[f], cent, -1.0);
        const std::vector<int> & p = best(f, fp.perm[f], cent);
        if (p != fp.perm[f]) {
          fp.perm[f] = p;
          changed = true;
        }
        add(f, fp.perm[f], cent, 1.0);
      }
      if (!changed) {
        break;
      }
    }
    return fp;
  }

private:
  std::vector<Eigen::MatrixXd> env_;
  int speakers_;
  int bins_;
  int frames_;
  std::vector<std::vector<int>> perms_;
};

}  // namespace

AlignResult corr_freq_align(const MultiSpectrogram & estimates, const CorrAlignOptions & opt)
{
  require_uniform_geometry(estimates, "corr_freq_align");
  const int speakers = static_cast<int>(estimates.size());
  require(speakers >= 2, "corr_freq_align: need at least two estimates");
  require(speakers <= kMaxSearchSpeakers, "corr_freq_align: at most 8 speakers");
  require(opt.max_sweeps >= 0, "corr_freq_align: max_sweeps must be >= 0");
  for (const auto & x : estimates) {
    require<NumericalError>(x.allFinite(), "corr_freq_align: non-finite estimate");
  }

  const int bins = static_cast<int>(estimates.front().cols());
  const CorrAligner aligner(estimates);
  AlignResult r;
  r.perm = FrequencyPermutation::identity(bins, speakers);
  if (aligner.degenerate()) {
    r.perm.degenerate = true;
  } else {
    FrequencyPermutation fp = aligner.run(opt.max_sweeps);
    if (aligner.total_score(fp) > aligner.total_score(r.perm) + 1e-12) {
      r.perm = std::move(fp);
    }
  }
  r.aligned = apply_permutation(estimates, r.perm);
  return r;
}

int count_mismatches(const FrequencyPermutation & a, const FrequencyPermutation & b)
{
  require<GeometryError>(a.bins() == b.bins(), "count_mismatches: bin counts differ");
  int n = 0;
  for (int f = 0; f < a.bins(); ++f) {
    n += a.perm[f] != b.perm[f] ? 1 : 0;
  }
  return n;
}

PitResult pit_speaker_permutation(
  const MultiSignal & estimates, const MultiSignal & references, const PairMetric & metric)
{
  const int speakers = static_cast<int>(references.size());
  require(speakers >= 1, "pit: need at least one reference");
  require(speakers <= kMaxSearchSpeakers, "pit: at most 8 speakers");
  require<GeometryError>(
    static_cast<int>(estimates.size()) == speakers, "pit: one estimate per reference required");
  for (int c = 0; c < speakers; ++c) {
    require<GeometryError>(
      estimates[c].size() == references.front().size() && references[c].size() == references.front().size(),
      "pit: signal lengths differ");
  }
  const PairMetric m = metric ? metric : PairMetric([](const Signal & e, const Signal & r) { return si_sdr(e, r); });

  Eigen::MatrixXd table(speakers, speakers);  // table(ref, est)
  for (int c = 0; c < speakers; ++c) {
    for (int e = 0; e < speakers; ++e) {
      table(c, e) = m(estimates[e], references[c]);
    }
  }
  PitResult r;
  r.mean = -std::numeric_limits<double>::infinity();
  for (const auto & p : all_permutations(speakers)) {
    double s = 0.0;
    for (int c = 0; c < speakers; ++c) {
      s += table(c, p[c]);
    }
    s /= speakers;
    if (s > r.mean) {
      r.mean = s;
      r.perm = p;
    }
  }
  r.values.resize(speakers);
  for (int c = 0; c < speakers; ++c) {
    r.values(c) = table(c, r.perm[c]);
  }
  return r;
}

void write_permutation_csv(std::ostream & os, const FrequencyPermutation & perm)
{
  os.imbue(std::locale::classic());
  os << "f,perm\n";
  for (int f = 0; f < perm.bins(); ++f) {
    os << f << ',';
    for (std::size_t c = 0; c < perm.perm[f].size(); ++c) {
      os << (c ? " " : "") << perm.perm[f][c];
    }
    os << '\n';
  }
}

}  // namespace fcpsep
