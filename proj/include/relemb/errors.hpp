#pragma once

#include <stdexcept>
#include <string>

namespace relemb {

// Malformed or inconsistent input: bad files, unknown names, invalid weights.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical breakdown during training (NaN/Inf in an embedding).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace relemb
