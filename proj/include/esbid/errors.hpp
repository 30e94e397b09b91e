#pragma once

#include <stdexcept>
#include <string>

namespace esbid {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid model or case data (violated invariant, bad reference).
struct ModelError : Error {
  using Error::Error;
};

// Numerical failure inside a solver (singular basis, lost feasibility).
struct SolverError : Error {
  using Error::Error;
};

// Big-M sizing impossible (unbounded pair, non-finite override).
struct PolicyError : Error {
  using Error::Error;
};

// Malformed input text (MPS, JSON case file); message carries location.
struct ParseError : Error {
  using Error::Error;
};

// Inconsistent run configuration (e.g. network mode without a network).
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace esbid
