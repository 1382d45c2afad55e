#pragma once

#include <stdexcept>
#include <string>

namespace mpcmatch {

// thrown when a documented precondition or structural guarantee is violated
struct ContractViolation : std::runtime_error {
  explicit ContractViolation(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mpcmatch
