#pragma once

#include <stdexcept>

namespace bwt {

/// Base class for recoverable computation failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A tan/tanh/cot argument sits on (or within 1e-12 of) a singularity.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Transmissivity is monotone across a peak-search bracket.
class NoPeakError : public Error {
 public:
  using Error::Error;
};

/// Two roots fell inside one grid cell of a root scan.
class WindowTooCoarseError : public Error {
 public:
  using Error::Error;
};

}  // namespace bwt
