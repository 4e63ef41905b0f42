#pragma once

#include <stdexcept>
#include <string>

namespace pairsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A spectral line or band lies outside the grid it is sampled on.
class OutOfBand : public Error {
 public:
  using Error::Error;
};

class UnderResolved : public Error {
 public:
  using Error::Error;
};

/// The computation produced (or was handed) an all-zero / annihilated state.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class NotNormalized : public Error {
 public:
  using Error::Error;
};

class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, int suggested_max_n)
      : Error(what), suggested_max_n_(suggested_max_n) {}
  int suggested_max_n() const noexcept { return suggested_max_n_; }

 private:
  int suggested_max_n_;
};

/// A fringe scan shorter than one period.
class InsufficientCoverage : public Error {
 public:
  using Error::Error;
};

/// Scenario file problems. The message always carries the offending key path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace pairsim
