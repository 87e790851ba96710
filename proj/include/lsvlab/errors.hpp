#pragma once

#include <stdexcept>
#include <string>

namespace lsv {

/// Malformed arguments: wrong shapes, non-finite entries, out-of-range parameters.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Experiment configuration that fails validation (missing fields, bad grids).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested allocation exceeds the configured memory budget.
class SizingError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Rank deficiency where a full-rank matrix was required (zero singular value,
/// non-unique kernel). Callers usually resample.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation not available for the given law or test function.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Search would exceed its evaluation budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A construction that is supposed to satisfy a certified property does not.
class ConstructionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace lsv
