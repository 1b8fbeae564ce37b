#pragma once

#include <stdexcept>
#include <string>

namespace xcop {

/// Raised when inputs violate a mathematical precondition (bad parameters,
/// non-normalized measures, failed hypotheses). The CLI maps it to exit 1.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace xcop
