#pragma once

#include <stdexcept>
#include <string>

namespace vqebench {

/// Malformed user input: bad tokens, out-of-range indices, invalid sizes.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Problems reading or writing benchmark data files.
class DataFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite objective values, non-Hermitian operators, dimension overflow.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vqebench
