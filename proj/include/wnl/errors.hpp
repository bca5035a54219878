#pragma once

#include <stdexcept>
#include <string>

namespace wnl {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration or descriptor values (CLI exit code 2).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// A run was set up in a way that violates the model assumptions,
/// e.g. a probe packet overlapping the nonlinearity support (exit code 2).
class SetupError : public Error {
public:
  using Error::Error;
};

/// Numerical failure: divergence, degenerate amplitudes, ambiguous
/// branch cuts (exit code 3).
class NumericError : public Error {
public:
  using Error::Error;
};

/// File input/output failure (exit code 4).
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace wnl
