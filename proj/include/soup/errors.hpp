#pragma once

#include <stdexcept>
#include <string>

namespace soup {

// Shape disagreement between operands (rows/cols/lengths).
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// A configuration value violates a documented precondition.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// A quantity that must be nonzero/finite by the algorithm's invariants is not;
// signals corrupted state upstream rather than bad user input.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace soup
