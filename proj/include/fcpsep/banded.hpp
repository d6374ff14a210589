// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FCPSEP_BANDED_HPP_
#define FCPSEP_BANDED_HPP_

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>

namespace fcpsep
{

namespace detail
{
inline double abs2(double v) { return v * v; }
template<typename T>
T abs2(const std::complex<T> & v) { return std::norm(v); }
inline double conj(double v) { return v; }
template<typename T>
std::complex<T> conj(const std::complex<T> & v) { return std::conj(v); }
}  // namespace detail

/// Hermitian matrix stored by its lower band: band(d, j) = A(j + d, j),
/// 0 <= d <= bandwidth.
template<typename Scalar>
class BandedHermitian
{
public:
  using Index = Eigen::Index;
  using Band = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  BandedHermitian(Index n, Index bandwidth) : bandwidth_(bandwidth), band_(Band::Zero(bandwidth + 1, n)) {}

  Index size() const { return band_.cols(); }
  Index bandwidth() const { return bandwidth_; }

  /// Adds v to A(i, j) for i >= j (and implicitly conj(v) to A(j, i)).
  void add_lower(Index i, Index j, const Scalar & v) { band_(i - j, j) += v; }
  Scalar lower(Index i, Index j) const { return band_(i - j, j); }
  void add_diagonal(const typename Eigen::NumTraits<Scalar>::Real & v) { band_.row(0).array() += v; }

  /// Dense copy, for checks.
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense() const
  {
    const Index n = size();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a = decltype(a)::Zero(n, n);
    for (Index j = 0; j < n; ++j) {
      for (Index d = 0; d <= bandwidth_ && j + d < n; ++d) {
        a(j + d, j) = band_(d, j);
        a(j, j + d) = detail::conj(band_(d, j));
      }
    }
    return a;
  }

  const Band & band() const { return band_; }

private:
  Index bandwidth_;
  Band band_;
};

/// Cholesky factorization A = L L^H that keeps the band of A, O(n * bw^2).
template<typename Scalar>
class BandedCholesky
{
public:
  using Index = Eigen::Index;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit BandedCholesky(const BandedHermitian<Scalar> & a) : bw_(a.bandwidth()), l_(a.band()) { factorize(); }

  /// False when a pivot was not positive and finite.
  bool ok() const { return ok_; }

  /// Square of the ratio of the largest to the smallest pivot of L, a cheap
  /// lower bound on the 2-norm condition number of A.
  Real condition_estimate() const { return ok_ ? (max_pivot_ / min_pivot_) * (max_pivot_ / min_pivot_) : Real(INFINITY); }

  Vector solve(Vector b) const
  {
    const Index n = l_.cols();
    for (Index i = 0; i < n; ++i) {
      Scalar acc = b(i);
      for (Index k = std::max<Index>(0, i - bw_); k < i; ++k) {
        acc -= l_(i - k, k) * b(k);
      }
      b(i) = acc / l_(0, i);
    }
    for (Index i = n - 1; i >= 0; --i) {
      Scalar acc = b(i);
      for (Index k = i + 1; k <= std::min(n - 1, i + bw_); ++k) {
        acc -= detail::conj(l_(k - i, i)) * b(k);
      }
      b(i) = acc / l_(0, i);
    }
    return b;
  }

private:
  void factorize()
  {
    const Index n = l_.cols();
    for (Index j = 0; j < n; ++j) {
      Real diag = std::real(l_(0, j));
      for (Index k = std::max<Index>(0, j - bw_); k < j; ++k) {
        diag -= detail::abs2(l_(j - k, k));
      }
      if (!(diag > 0) || !std::isfinite(diag)) {
        ok_ = false;
        return;
      }
      const Real pivot = std::sqrt(diag);
      l_(0, j) = pivot;
      max_pivot_ = std::max(max_pivot_, pivot);
      min_pivot_ = std::min(min_pivot_, pivot);
      for (Index i = j + 1; i <= std::min(n - 1, j + bw_); ++i) {
        Scalar acc = l_(i - j, j);
        for (Index k = std::max<Index>(0, i - bw_); k < j; ++k) {
          acc -= l_(i - k, k) * detail::conj(l_(j - k, k));
        }
        l_(i - j, j) = acc / pivot;
      }
    }
    ok_ = true;
  }

  Index bw_;
  typename BandedHermitian<Scalar>::Band l_;
  bool ok_ = false;
  Real max_pivot_ = 0;
  Real min_pivot_ = Real(INFINITY);
};

}  // namespace fcpsep

#endif  // FCPSEP_BANDED_HPP_
