#pragma once

#include <stdexcept>
#include <string>

namespace fista {

// A computation produced a non-finite iterate or a factorization failed.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what, long iteration = -1)
      : std::runtime_error(what), iteration(iteration) {}
  long iteration;  // offending iteration, or -1 when not tied to one
};

}  // namespace fista
