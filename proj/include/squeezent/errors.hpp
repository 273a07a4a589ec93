#pragma once

#include <stdexcept>
#include <string>

namespace sqz {

/// Invalid argument or state (bad sector, wrong parity, trace off, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Request exceeds what a dense or exact-integer path can handle.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two certified results contradict each other; always a bug.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sqz
