#pragma once

#include <stdexcept>
#include <string>

namespace pitgen {

struct PrimalityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DivisionByZero : std::domain_error {
  using std::domain_error::domain_error;
};
struct ArityMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct FieldMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
// The field cannot host the point sets or node sets a construction needs.
struct FieldTooSmall : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace pitgen
