#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cbcast {

// Base of every error the library throws.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
  using Error::Error;
};

class InvalidPermutation : public InvalidParameter {
public:
  using InvalidParameter::InvalidParameter;
};

// A documented precondition of the model (delay sensitivity, bound hypothesis) does not hold.
class PreconditionViolation : public Error {
public:
  using Error::Error;
};

// A payoff expression left its domain (non-positive log argument or delay denominator).
class DomainError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

struct IterationRecord {
  double broadcast_bandwidth = 0.0;
  double broadcast_price = 0.0;
  double bound = 0.0;
};

class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, std::vector<IterationRecord> trace)
      : Error(what), trace_(std::move(trace)) {}

  const std::vector<IterationRecord>& trace() const noexcept { return trace_; }

private:
  std::vector<IterationRecord> trace_;
};

} // namespace cbcast
