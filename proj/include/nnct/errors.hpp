#pragma once

#include <stdexcept>
#include <string>

namespace nnct {

/// Invalid input data (bad pattern, malformed file, inconsistent table).
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numeric failure (non-symmetric matrix, negative variance, invalid df).
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nnct
