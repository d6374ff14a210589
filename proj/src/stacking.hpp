// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FCPSEP_SRC_STACKING_HPP_
#define FCPSEP_SRC_STACKING_HPP_

#include "fcpsep/core.hpp"

#include <algorithm>

namespace fcpsep::detail
{

/// Writes the stacked window of bin `bin` into `out` (frames x taps):
/// out(t, k) = z(t - past + k, bin), zero outside [0, frames).
template<typename Derived>
void fill_window(
  const Spectrogram & z, int bin, int past, int taps, Eigen::MatrixBase<Derived> const & out_)
{
  auto & out = const_cast<Eigen::MatrixBase<Derived> &>(out_);
  const int frames = static_cast<int>(z.rows());
  out.setZero();
  for (int k = 0; k < taps; ++k) {
    const int shift = k - past;  // out(t, k) = z(t + shift)
    const int t0 = std::max(0, -shift);
    const int t1 = std::min(frames, frames - shift);
    if (t1 > t0) {
      out.col(k).segment(t0, t1 - t0) = z.col(bin).segment(t0 + shift, t1 - t0);
    }
  }
}

}  // namespace fcpsep::detail

#endif  // FCPSEP_SRC_STACKING_HPP_
