#pragma once

#include <stdexcept>
#include <string>

namespace tripbench {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad argument values: non-finite coordinates, empty point lists, malformed routes.
struct InvalidInputError : Error {
  using Error::Error;
};

// Structured text/document could not be parsed; message carries the offending path or attribute.
struct ParseError : Error {
  using Error::Error;
};

// A dataset category ended up empty after ingestion.
struct EmptyCategoryError : Error {
  using Error::Error;
};

// A preference query filters some category down to nothing.
struct InfeasibleQueryError : Error {
  using Error::Error;
};

// A plan or instance cannot be constructed (e.g. not enough candidates).
struct InfeasibleError : Error {
  using Error::Error;
};

// Route instance exceeds the solver node cap.
struct InfeasibleSizeError : Error {
  using Error::Error;
};

// A route does not respect the instance's quotas/partition contract.
struct InvalidRouteError : Error {
  using Error::Error;
};

// A metric has no evaluable inputs.
struct UndefinedMetricError : Error {
  using Error::Error;
};

// An evaluation batch contains no plans.
struct EmptyBatchError : Error {
  using Error::Error;
};

// A rendered prompt exceeds the configured context budget.
struct ContextOverflowError : Error {
  using Error::Error;
};

}  // namespace tripbench
