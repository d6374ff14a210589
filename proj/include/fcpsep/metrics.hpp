// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FCPSEP_METRICS_HPP_
#define FCPSEP_METRICS_HPP_

#include "fcpsep/core.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

namespace fcpsep
{

/// Reported in place of +inf / -inf.
inline constexpr double kMetricCeilingDb = 120.0;

namespace detail
{
inline double clamp_db(double num, double den)
{
  if (!(den > 0.0)) {
    return kMetricCeilingDb;
  }
  if (!(num > 0.0)) {
    return -kMetricCeilingDb;
  }
  return std::clamp(10.0 * std::log10(num / den), -kMetricCeilingDb, kMetricCeilingDb);
}
}  // namespace detail

/// Scale-invariant SDR in dB: 10 log10(|a s|^2 / |a s - est|^2), a = <est, s> / |s|^2.
template<typename DerivedE, typename DerivedR>
double si_sdr(const Eigen::MatrixBase<DerivedE> & est, const Eigen::MatrixBase<DerivedR> & ref)
{
  require<GeometryError>(est.size() == ref.size(), "si_sdr: lengths differ");
  const double ref_energy = ref.squaredNorm();
  require<DegenerateInputError>(ref_energy > 0.0, "si_sdr: zero reference");
  if (!(est.squaredNorm() > 0.0)) {
    return -kMetricCeilingDb;
  }
  const double alpha = est.dot(ref) / ref_energy;
  const auto target = (alpha * ref).eval();
  return detail::clamp_db(target.squaredNorm(), (target - est).squaredNorm());
}

/// 10 log10(|ref|^2 / |ref - est|^2).
template<typename DerivedE, typename DerivedR>
double snr(const Eigen::MatrixBase<DerivedE> & est, const Eigen::MatrixBase<DerivedR> & ref)
{
  require<GeometryError>(est.size() == ref.size(), "snr: lengths differ");
  const double ref_energy = ref.squaredNorm();
  require<DegenerateInputError>(ref_energy > 0.0, "snr: zero reference");
  return detail::clamp_db(ref_energy, (ref - est).squaredNorm());
}

struct MetricReport
{
  std::vector<int> perm;  // perm[c]: estimate assigned to reference c
  Eigen::VectorXd si_sdr;
  Eigen::VectorXd snr;
  Eigen::VectorXd si_sdr_delta;  // versus the mixture
  Eigen::VectorXd snr_delta;
};

/// Assigns estimates to references by PIT on SI-SDR, then scores each pair
/// and the mixture against each reference.
MetricReport report(const MultiSignal & estimates, const MultiSignal & references, const Signal & mixture);

/// `speaker,si_sdr,snr,si_sdr_delta,snr_delta`
void write_report_csv(std::ostream & os, const MetricReport & r);

}  // namespace fcpsep

#endif  // FCPSEP_METRICS_HPP_
