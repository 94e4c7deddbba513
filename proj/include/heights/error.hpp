#pragma once

#include <stdexcept>
#include <string>

namespace heights {

// Caller passed something outside an operation's domain (composite prime,
// zero where a nonzero value is required, malformed spec, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Analytic domain violations, e.g. zeta(s) for s <= 1 or a divergent integral.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// local_height_factor on a coordinate section that vanishes at the point.
class SectionVanishes : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Required data is absent (missing stratum counts for a prime, ...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation would exceed the desk-scale limits.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Evaluation hit a pole of a local factor. `component` names the boundary
// component responsible, when there is one.
class PoleError : public std::runtime_error {
 public:
  PoleError(const std::string& what, std::string component)
      : std::runtime_error(what), component_(std::move(component)) {}
  const std::string& component() const noexcept { return component_; }

 private:
  std::string component_;
};

}  // namespace heights
