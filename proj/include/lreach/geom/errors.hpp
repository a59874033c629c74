#pragma once

#include <stdexcept>
#include <string>

namespace lreach::geom {

/// Raised when an operation needs a bounded set and the input has a recession
/// direction.
class UnboundedError : public std::runtime_error {
 public:
  explicit UnboundedError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised by V<->H conversion for lower-dimensional (flat) polytopes.
class NotFullDimensionalError : public std::runtime_error {
 public:
  explicit NotFullDimensionalError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace lreach::geom
