#ifndef GEXPECT_ERRORS_HPP
#define GEXPECT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gexpect {

// Bad experiment / family configuration (empty family, CFL violation, ...).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Exact computation would exceed the configured state/tree budget.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

// A component broke a declared contract (e.g. policy output out of range).
class ContractError : public std::logic_error {
 public:
  explicit ContractError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace gexpect

#endif  // GEXPECT_ERRORS_HPP
