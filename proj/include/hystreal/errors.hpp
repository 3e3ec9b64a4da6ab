#pragma once

#include <stdexcept>
#include <string>

namespace hystreal {

/// Precondition violated by the caller (wrong level, boundary transition, bad argument).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A construction step produced an object that fails its own audit.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature, root finding or integration did not reach the requested accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Simulated dynamics disagree with the realization bookkeeping.
class RealizationMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hystreal
