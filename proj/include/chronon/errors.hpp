#ifndef CHRONON_ERRORS_HPP
#define CHRONON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace chronon {

/// Argument outside the mathematical domain of an operation (λ = 0, E = 0, τ ≤ 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid grid / packet configuration (band containment, wrap-around guard).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation invoked on the wrong kind of state or with bad counts.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested capability not available for the given function class.
class CapabilityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Numerical probe failed (test state vanishes at probe point, singular expansion, zero norm).
class ProbeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace chronon

#endif  // CHRONON_ERRORS_HPP
