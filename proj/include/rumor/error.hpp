#pragma once

#include <stdexcept>
#include <string>

namespace rumor {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied parameter is outside its documented domain.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Not enough data points to perform a fit.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// Assortativity is undefined because only one label class is present.
class DegenerateLabels : public Error {
 public:
  using Error::Error;
};

/// Assortativity is undefined on a graph without edges.
class EmptySubgraph : public Error {
 public:
  using Error::Error;
};

/// Malformed scenario file, unknown builtin, bad override.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace rumor
