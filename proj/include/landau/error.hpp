#pragma once

#include <stdexcept>
#include <string>

namespace landau {

/// Raised when an argument violates a documented precondition.
class invalid_argument : public std::invalid_argument {
 public:
  invalid_argument(std::string module, const std::string& what)
      : std::invalid_argument(module + ": " + what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// Raised when a computation cannot deliver a result to its stated accuracy.
class numerical_error : public std::runtime_error {
 public:
  numerical_error(std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

}  // namespace landau
