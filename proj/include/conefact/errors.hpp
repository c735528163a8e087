#pragma once

#include <stdexcept>
#include <string>

namespace conefact {

// An eigenvalue (or other quantity) falls outside the domain of a
// spectral function, e.g. a negative eigenvalue under a square root.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Operands built over different cone structures, or mismatched lengths.
class StructureMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative kernel (Jacobi sweeps) failed to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed textual input. `position` is a 0-based character offset.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace conefact
