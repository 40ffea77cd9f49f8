#pragma once

#include <stdexcept>
#include <string>

namespace ewsim {

// Incident energy exceeds the barrier height: the atom reaches the surface
// instead of turning around. Ensemble code counts this as a loss channel;
// single-trajectory entry points throw it.
class MirrorOverrunError : public std::domain_error {
 public:
  explicit MirrorOverrunError(const std::string& what) : std::domain_error(what) {}
};

// The integrator could not finish within its step budget (step underflow or
// pathological configuration).
class IntegrationError : public std::runtime_error {
 public:
  explicit IntegrationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ewsim
