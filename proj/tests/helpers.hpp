// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FCPSEP_TESTS_HELPERS_HPP_
#define FCPSEP_TESTS_HELPERS_HPP_

#include "fcpsep/core.hpp"
#include "fcpsep/rng.hpp"

#include <cmath>
#include <random>

namespace fcpsep::testing
{

inline Signal gaussian_signal(Eigen::Index n, Rng & rng)
{
  std::normal_distribution<double> g;
  Signal s(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s(i) = g(rng);
  }
  return s;
}

inline Spectrogram gaussian_spectrogram(Eigen::Index frames, Eigen::Index bins, Rng & rng)
{
  std::normal_distribution<double> g;
  Spectrogram s(frames, bins);
  for (Eigen::Index f = 0; f < bins; ++f) {
    for (Eigen::Index t = 0; t < frames; ++t) {
      s(t, f) = Complex(g(rng), g(rng));
    }
  }
  return s;
}

template<typename A, typename B>
double rel_err(const A & a, const B & b)
{
  return (a - b).norm() / b.norm();
}

// Delay by `lag` frames (zeros shifted in).
inline Spectrogram delay_frames(const Spectrogram & s, int lag)
{
  Spectrogram out = Spectrogram::Zero(s.rows(), s.cols());
  if (lag < s.rows()) {
    out.bottomRows(s.rows() - lag) = s.topRows(s.rows() - lag);
  }
  return out;
}

}  // namespace fcpsep::testing

#endif  // FCPSEP_TESTS_HELPERS_HPP_
