#pragma once

#include <stdexcept>
#include <string>

namespace clustsum {

// Raised for malformed input data, mismatched dimensions and invalid
// configuration. The CLI maps it to exit code 3.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace clustsum
