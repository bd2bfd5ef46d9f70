#pragma once

#include <stdexcept>
#include <string>

namespace optred {

/// Input outside the domain of an operation (bad parameters, point off a level set, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed (non-convergence, ambiguous stratum, chart escape).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace optred
