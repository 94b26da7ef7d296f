#pragma once

#include <stdexcept>

namespace screenal {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input data: missing columns, bad labels, duplicate ids.
struct SchemaError : Error {
  using Error::Error;
};

// Invalid experiment configuration: unknown key or range violation.
struct ConfigError : Error {
  using Error::Error;
};

// Annotation request that exceeds the remaining vote budget.
struct BudgetExhaustedError : Error {
  using Error::Error;
};

// Non-finite values encountered during numeric computation.
struct NumericError : Error {
  using Error::Error;
};

}  // namespace screenal
