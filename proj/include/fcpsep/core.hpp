// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FCPSEP_CORE_HPP_
#define FCPSEP_CORE_HPP_

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace fcpsep
{

// Spectrograms are stored frames x bins, column-major, so every frequency
// column is contiguous. Per-frequency solvers walk columns.
template<typename Scalar>
using SpectrogramT = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template<typename Scalar>
using SignalT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using Spectrogram = SpectrogramT<double>;
using Signal = SignalT<double>;
using ComplexVector = Eigen::VectorXcd;

/// One spectrogram per microphone (or per speaker, depending on context).
using MultiSpectrogram = std::vector<Spectrogram>;
using MultiSignal = std::vector<Signal>;

/// Base of every error raised by the library. The CLI maps subclasses to
/// exit codes: ConfigError 1, IoError 2, NumericalError 3.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or parameter values.
class ConfigError : public Error
{
public:
  using Error::Error;
};

/// Inputs whose shapes do not agree.
class GeometryError : public ConfigError
{
public:
  using ConfigError::ConfigError;
};

/// Inputs that make a quantity undefined (all-zero mixture, zero reference).
class DegenerateInputError : public ConfigError
{
public:
  using ConfigError::ConfigError;
};

class IoError : public Error
{
public:
  using Error::Error;
};

/// Singular systems, divergence, non-finite intermediate values.
class NumericalError : public Error
{
public:
  using Error::Error;
};

template<typename E = ConfigError>
inline void require(bool cond, const std::string & message)
{
  if (!cond) {
    throw E(message);
  }
}

template<typename Derived>
bool all_finite(const Eigen::DenseBase<Derived> & m)
{
  return m.allFinite();
}

/// Throws GeometryError unless every spectrogram has the same frames x bins.
void require_uniform_geometry(const MultiSpectrogram & specs, const std::string & what);

/// Throws GeometryError unless the two spectrograms share a shape.
void require_same_geometry(const Spectrogram & a, const Spectrogram & b, const std::string & what);

}  // namespace fcpsep

#endif  // FCPSEP_CORE_HPP_
