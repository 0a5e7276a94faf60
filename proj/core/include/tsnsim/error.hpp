#pragma once

#include <stdexcept>
#include <string>

namespace tsnsim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An event was scheduled before the current simulation time.
class CausalityError : public Error {
 public:
  using Error::Error;
};

/// Invalid scenario, GCL, stream or servo configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; carries the offending 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// The measurement procedure gave up (e.g. PTP health retries exhausted).
class ScenarioError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tsnsim
