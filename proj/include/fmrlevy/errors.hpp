#pragma once

#include <stdexcept>
#include <string>

namespace fmrlevy {

// Argument outside the region where an operation is defined (strip, bounds, arbitrage limits).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical routine failed to converge or produced a non-finite value.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested simulation exceeds the configured work budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fmrlevy

namespace fmrlevy {

// Malformed input file: bad JSON or CSV, missing keys, unknown fields.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace fmrlevy
