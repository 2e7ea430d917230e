#pragma once

#include <stdexcept>
#include <string>

namespace cimlmg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violates a documented precondition (e.g. lambda == 0).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// A closed form is evaluated outside the branch where it is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// CIM parameters for which the effective LMG mapping does not exist.
class MappingInvalid : public Error {
 public:
  using Error::Error;
};

/// Truncated Fock space too small for the requested state or evolution.
class CutoffError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Stochastic integration failure: step-size violation or blow-up.
class SdeError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Data does not match the declared column layout.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace cimlmg
