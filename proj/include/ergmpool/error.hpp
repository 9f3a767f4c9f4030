#pragma once

#include <stdexcept>
#include <string>

namespace ergmpool {

// Base class for every failure raised by the library. The CLI maps the
// subclasses onto exit statuses.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input row; message carries file and line.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a data invariant (self-loop, duplicate tie,
// unknown node, bad manifest...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DegenerateNetworkError : public Error {
 public:
  using Error::Error;
};

class MissingCovariateError : public Error {
 public:
  using Error::Error;
};

class UnsupportedTermError : public Error {
 public:
  using Error::Error;
};

class NonIdentifiedError : public Error {
 public:
  using Error::Error;
};

class SizeLimitError : public Error {
 public:
  using Error::Error;
};

class EmptyPoolError : public Error {
 public:
  using Error::Error;
};

class UnsupportedConstraintError : public Error {
 public:
  using Error::Error;
};

class UnimputableColumnError : public Error {
 public:
  using Error::Error;
};

}  // namespace ergmpool
