#pragma once

#include <stdexcept>
#include <string>

namespace ccwb {

// Domain error: bad input data rather than broken code (unknown names,
// malformed documents, missing table entries, empty search spaces).
// The CLI maps these to exit status 1; usage errors exit with 2.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ccwb
