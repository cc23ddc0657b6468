#ifndef IPFACTOR_ERROR_HPP
#define IPFACTOR_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ipfactor {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NotHermitianError : public Error {
 public:
  using Error::Error;
};

class NotPositiveError : public Error {
 public:
  using Error::Error;
};

class NotSelfAdjointError : public Error {
 public:
  using Error::Error;
};

/// A set expected to be linearly independent is not.
class DependentSetError : public Error {
 public:
  using Error::Error;
};

/// The matrix logarithm could not be placed on a branch that keeps it
/// purely imaginary.
class BranchError : public Error {
 public:
  using Error::Error;
};

/// The C/D route of hermitize failed; callers fall back to the doubling route.
class HermitizeError : public Error {
 public:
  using Error::Error;
};

/// A positivity back-off or shift could not produce the required margin.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ipfactor

#endif
