#ifndef CATLAB_ERRORS_HPP
#define CATLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace catlab {

/// A parameter left its admissible region. The message starts with the
/// offending parameter name ("gamma: ...", "alpha: ...").
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// An iteration failed to converge. The message carries the offending
/// bracket or budget.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace catlab

#endif  // CATLAB_ERRORS_HPP
