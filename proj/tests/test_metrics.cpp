// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fcpsep/align.hpp"
#include "fcpsep/metrics.hpp"

#include "helpers.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

using namespace fcpsep;
using fcpsep::testing::gaussian_signal;

TEST_CASE("si_sdr ceilings and floor")
{
  Rng rng(1);
  const Signal s = gaussian_signal(1000, rng);
  CHECK(si_sdr(s, s) == kMetricCeilingDb);
  CHECK(si_sdr(Signal(2.0 * s), s) == kMetricCeilingDb);
  CHECK(si_sdr(Signal::Zero(1000), s) == -kMetricCeilingDb);
  CHECK_THROWS_AS(si_sdr(s, Signal::Zero(1000)), DegenerateInputError);
  CHECK_THROWS_AS(si_sdr(s, Signal::Ones(999)), GeometryError);
}

TEST_CASE("orthogonal noise at equal energy gives 0 dB")
{
  Rng rng(2);
  const Signal s = gaussian_signal(4000, rng);
  Signal n = gaussian_signal(4000, rng);
  n -= n.dot(s) / s.squaredNorm() * s;
  n *= s.norm() / n.norm();
  CHECK(std::abs(si_sdr(Signal(s + n), s)) < 0.01);
  CHECK(std::abs(snr(Signal(s + n), s)) < 0.01);
}

TEST_CASE("si_sdr ignores positive scaling", "[property]")
{
  Rng rng(3);
  const Signal s = gaussian_signal(2000, rng);
  const Signal est = s + 0.5 * gaussian_signal(2000, rng);
  const double base = si_sdr(est, s);
  for (double k : {1e-3, 0.5, 3.0, 1e4}) {
    CHECK(std::abs(si_sdr(Signal(k * est), s) - base) < 1e-9);
  }
}

TEST_CASE("snr by hand")
{
  Rng rng(4);
  const Signal s = gaussian_signal(100, rng);
  CHECK(snr(s, s) == kMetricCeilingDb);
  CHECK(snr(Signal::Zero(100), s) == Catch::Approx(0.0).margin(1e-12));
  CHECK(snr(Signal(0.5 * s), s) == Catch::Approx(10.0 * std::log10(4.0)));
}

TEST_CASE("report against mixture copies has zero deltas")
{
  Rng rng(5);
  const MultiSignal refs = {gaussian_signal(800, rng), gaussian_signal(800, rng)};
  const Signal mix = refs[0] + refs[1];
  const MetricReport r = report({mix, mix}, refs, mix);
  CHECK(r.si_sdr_delta.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(r.snr_delta.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("report with oracle estimates")
{
  Rng rng(6);
  const MultiSignal refs = {gaussian_signal(800, rng), gaussian_signal(800, rng)};
  const Signal mix = refs[0] + refs[1];
  const MetricReport r = report({refs[1], refs[0]}, refs, mix);
  CHECK(r.perm == std::vector<int>{1, 0});
  for (int c = 0; c < 2; ++c) {
    CHECK(r.si_sdr(c) == kMetricCeilingDb);
    CHECK(r.si_sdr_delta(c) == Catch::Approx(kMetricCeilingDb - si_sdr(mix, refs[c])));
    CHECK(r.snr_delta(c) == Catch::Approx(kMetricCeilingDb - snr(mix, refs[c])));
  }
}

TEST_CASE("report uses the pit optimum")
{
  Rng rng(7);
  MultiSignal refs;
  MultiSignal est;
  for (int c = 0; c < 3; ++c) {
    refs.push_back(gaussian_signal(600, rng));
  }
  for (int c = 0; c < 3; ++c) {
    est.push_back(refs[(c + 2) % 3] + 0.7 * gaussian_signal(600, rng));
  }
  const MetricReport r = report(est, refs, refs[0] + refs[1] + refs[2]);
  CHECK(r.perm == pit_speaker_permutation(est, refs).perm);
}

TEST_CASE("report csv")
{
  MetricReport r;
  r.perm = {0};
  r.si_sdr = Eigen::VectorXd::Constant(1, 12.5);
  r.snr = Eigen::VectorXd::Constant(1, 10.0);
  r.si_sdr_delta = Eigen::VectorXd::Constant(1, 3.25);
  r.snr_delta = Eigen::VectorXd::Constant(1, -1.0);
  std::ostringstream os;
  write_report_csv(os, r);
  CHECK(os.str() == "speaker,si_sdr,snr,si_sdr_delta,snr_delta\n0,12.5,10,3.25,-1\n");
}
