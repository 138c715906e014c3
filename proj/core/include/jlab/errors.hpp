#pragma once

#include <stdexcept>
#include <string>

namespace jlab {

/// Bad argument: wrong arity, out-of-range index or radius, mismatched grids.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input outside the mathematical domain of an operation (e.g. a form that is
/// required to be positive-definite but is not).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A class whose top self-intersection vanishes where a ratio needs it.
class DegenerateClassError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Missing or inconsistent configuration (e.g. no canonical class supplied).
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structural validation failure of an input object (fan, geometry, problem).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace jlab
