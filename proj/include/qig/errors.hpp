#pragma once

#include <stdexcept>
#include <string>

namespace qig {

/// Invalid or inconsistent configuration input (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical routine left its domain of validity (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// The request needs a capability the instance does not have, e.g. shot
/// estimation on a circuit whose layer generators are not single Pauli
/// strings (CLI exit code 4).
class CapabilityError : public std::runtime_error {
 public:
  explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qig
