#pragma once

#include <stdexcept>
#include <string>

namespace cheshire {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A basis label that is not part of its factor.
class LabelError : public Error {
 public:
  using Error::Error;
};

// Mismatched spaces, arities or factor names.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A state required to be unit norm is not, or a flagged operator fails its
// projector/unitary check.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

// Pre- and post-selected states are (numerically) orthogonal, so the weak
// value is undefined.
class OrthogonalSelectionError : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of a scenario builder.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace cheshire
