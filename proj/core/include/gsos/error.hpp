#pragma once

#include <stdexcept>
#include <string>

namespace gsos {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A term or state violates a language's well-formedness predicate.
class IllFormed : public Error {
 public:
  using Error::Error;
};

// A behavior table was consulted outside its sampled domain.
class IncompleteTable : public Error {
 public:
  using Error::Error;
};

class LanguageMismatch : public Error {
 public:
  using Error::Error;
};

class UnknownName : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace gsos
