#pragma once

#include <stdexcept>
#include <string>

namespace adacons {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input rejected before any computation: bad dimensions, violated
/// graph assumptions, malformed scenario files.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical kernel could not produce a trustworthy result
/// (singular system, non-convergence).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The simulated state became non-finite.
class DivergenceError : public Error {
 public:
  DivergenceError(double time, int agent, const std::string& what)
      : Error(what), time_(time), agent_(agent) {}

  double time() const { return time_; }
  /// Zero-based index of the first agent with a non-finite state.
  int agent() const { return agent_; }

 private:
  double time_;
  int agent_;
};

}  // namespace adacons
