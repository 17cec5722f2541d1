#pragma once

#include <stdexcept>
#include <string>

namespace tpex {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// An output grid drops more probability mass than the tolerance allows.
class CoverageError : public Error {
public:
  using Error::Error;
};

/// The delay window does not contain the full coherence envelope.
class WindowTooShortError : public Error {
public:
  using Error::Error;
};

/// The delay step is too coarse for the highest frequency in the band.
class AliasingError : public Error {
public:
  using Error::Error;
};

/// The trace carries no oscillation to analyse.
class NoSignalError : public Error {
public:
  using Error::Error;
};

/// A two-sided spectrum violates Hermitian symmetry beyond tolerance.
class AsymmetryError : public Error {
public:
  using Error::Error;
};

class NonUniformGridError : public Error {
public:
  using Error::Error;
};

/// Malformed configuration, CSV or JSON input.
class ParseError : public Error {
public:
  using Error::Error;
};

}  // namespace tpex
