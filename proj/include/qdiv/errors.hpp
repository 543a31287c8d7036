#pragma once

#include <stdexcept>
#include <string>

namespace qdiv {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input matrix fails a structural check (Hermiticity, positivity, trace, projection).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// A scalar function was evaluated outside its domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A scalar argument lies outside the admissible range of an inversion.
class RangeError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Probe images violate transition-probability preservation.
class NotAPreserverError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class OracleError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace qdiv
