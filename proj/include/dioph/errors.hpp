#pragma once

#include <stdexcept>
#include <string>

namespace dioph {

// Base for all library errors. The CLI maps subclasses to exit statuses.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

// A search or computation would exceed the configured budget or dimension guard.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dioph
