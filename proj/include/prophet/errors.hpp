#pragma once

#include <stdexcept>
#include <string>

namespace prophet {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Level sets of the max-CDF that cannot be resolved to a single threshold.
class NonInvertible : public Error {
 public:
  using Error::Error;
};

// g(t) reached zero or below before t = 1.
class DegenerateScheme : public Error {
 public:
  using Error::Error;
};

class BothSchemesFailed : public Error {
 public:
  using Error::Error;
};

class BracketFailure : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

class VerificationFailure : public Error {
 public:
  using Error::Error;
};

class InfeasibleLp : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

}  // namespace prophet
