// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fcpsep/metrics.hpp"

#include "fcpsep/align.hpp"

#include <iomanip>
#include <locale>

namespace fcpsep
{

MetricReport report(const MultiSignal & estimates, const MultiSignal & references, const Signal & mixture)
{
  const PitResult pit = pit_speaker_permutation(estimates, references);
  const auto speakers = static_cast<Eigen::Index>(references.size());
  MetricReport r;
  r.perm = pit.perm;
  r.si_sdr.resize(speakers);
  r.snr.resize(speakers);
  r.si_sdr_delta.resize(speakers);
  r.snr_delta.resize(speakers);
  for (Eigen::Index c = 0; c < speakers; ++c) {
    const Signal & ref = references[c];
    const Signal & est = estimates[pit.perm[c]];
    r.si_sdr(c) = si_sdr(est, ref);
    r.snr(c) = snr(est, ref);
    r.si_sdr_delta(c) = r.si_sdr(c) - si_sdr(mixture, ref);
    r.snr_delta(c) = r.snr(c) - snr(mixture, ref);
  }
  return r;
}

void write_report_csv(std::ostream & os, const MetricReport & r)
{
  os.imbue(std::locale::classic());
  os << "speaker,si_sdr,snr,si_sdr_delta,snr_delta\n" << std::setprecision(12);
  for (Eigen::Index c = 0; c < r.si_sdr.size(); ++c) {
    os << c << ',' << r.si_sdr(c) << ',' << r.snr(c) << ',' << r.si_sdr_delta(c) << ',' << r.snr_delta(c) << '\n';
  }
}

}  // namespace fcpsep
