// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FCPSEP_SOLVER_HPP_
#define FCPSEP_SOLVER_HPP_

#include "fcpsep/core.hpp"
#include "fcpsep/fcp.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace fcpsep
{

// Alternating least squares for the blind-deconvolution objective
//
//   J = sum_{t,f} |Y_0 - sum_c X_c|^2
//     + sum_{p>=1} sum_{t,f} |Y_p - sum_c sum_k conj(g_pck) X_c(t - past + k)|^2
//     + sum_{p>=1,f} delta_g(f) sum_{c,k} |g_pck|^2 + delta_x sum |X|^2,
//
// where X_c are the speaker images at the reference microphone (index 0).
// delta_g(f) = fcp.ridge * sum_t |Y_0(t,f)|^2 is fixed for the whole run and
// delta_x = source_ridge, so both half-steps are exact minimizers of J.

enum class AlsInit
{
  MixtureSplitRandom,  // Y_0 / C * (1 + 0.1 n), n complex Gaussian
  Oracle,              // init_estimates hold the true reference images
  User,                // init_estimates supplied by the caller
};

const char * to_string(AlsInit init);
AlsInit parse_als_init(const std::string & name);

struct AlsConfig
{
  int max_iters = 100;
  double tol_rel = 1e-6;  // per-iteration decrease of J relative to sum |Y|^2
  FcpConfig fcp{};
  AlsInit init = AlsInit::MixtureSplitRandom;
  double source_ridge = 1e-8;
  std::uint64_t seed = 0;
  MultiSpectrogram init_estimates;  // for Oracle and User

  void validate() const;
};

struct ObjectiveValue
{
  double data = 0.0;     // the two squared-error sums
  double penalty = 0.0;  // ridge terms
  double total() const { return data + penalty; }
};

struct AlsHalfStep
{
  int iter = 0;
  char step = 'f';  // 'f' filter step, 's' source step
  ObjectiveValue value;
};

struct AlsTrace
{
  std::vector<double> objective;  // penalized J; [0] after the initial filter step
  std::vector<double> data_term;  // unpenalized part, same indexing
  std::vector<AlsHalfStep> half_steps;
  std::vector<double> condition;  // worst source-step condition estimate per iteration
  int iterations = 0;
  bool converged = false;
  double mixture_energy = 0.0;    // sum_p sum_{t,f} |Y_p|^2
  std::string weighting = "unweighted";
  std::vector<std::string> warnings;
};

struct AlsResult
{
  MultiSpectrogram estimates;          // X_c at the reference microphone
  RelativeFilterBank filters;          // identity at mic 0
  std::vector<MultiSpectrogram> images;  // [p][c] filtered estimates
  AlsTrace trace;
};

/// delta_g(f) for the given mixtures.
Eigen::VectorXd filter_ridge(const MultiSpectrogram & mixtures, double ridge);

/// Joint unweighted least squares for the C * K coefficients of every
/// (p >= 1, f); mic 0 receives identity filters. ridge_per_bin has one entry
/// per bin (zero allowed; rank-deficient systems then get the minimum-norm
/// solution).
RelativeFilterBank filter_step(
  const MultiSpectrogram & estimates, const MultiSpectrogram & mixtures, const FcpConfig & cfg,
  const Eigen::VectorXd & ridge_per_bin);

enum class SourceSolver
{
  Banded,
  Dense,
};

/// Least squares for every X_c(., f) given the filters. Unknowns are
/// interleaved frame-major (t * C + c), so the normal matrix is banded with
/// half-bandwidth K * C - 1. Returns the worst condition estimate over bins
/// through `condition` when non-null.
MultiSpectrogram source_step(
  const RelativeFilterBank & filters, const MultiSpectrogram & mixtures, double source_ridge,
  double * condition = nullptr, SourceSolver solver = SourceSolver::Banded);

ObjectiveValue als_objective(
  const MultiSpectrogram & estimates, const RelativeFilterBank & filters, const MultiSpectrogram & mixtures,
  const Eigen::VectorXd & ridge_per_bin, double source_ridge);

/// Alternates source and filter steps from cfg.init until the decrease of J
/// over one iteration drops below tol_rel times the mixture energy, or
/// max_iters is reached. Throws NumericalError when J increases beyond 1e-9
/// relative slack.
AlsResult solve(const MultiSpectrogram & mixtures, int speakers, const AlsConfig & cfg);

/// Reference-microphone images of the estimates under the bank's mic-0
/// filters (identity for a bank from solve()).
MultiSpectrogram extract_reference_images(const MultiSpectrogram & estimates, const RelativeFilterBank & filters);

/// `iter,objective`
void write_trace_csv(std::ostream & os, const AlsTrace & trace);
/// `iter,step,objective,data_term`
void write_trace_detail_csv(std::ostream & os, const AlsTrace & trace);

}  // namespace fcpsep

#endif  // FCPSEP_SOLVER_HPP_
