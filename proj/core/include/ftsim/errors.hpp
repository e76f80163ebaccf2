#pragma once

#include <stdexcept>
#include <string>

namespace ftsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class PastTime : public Error {
public:
  using Error::Error;
};

class EmptyQueue : public Error {
public:
  EmptyQueue() : Error("advance() on an empty event queue") {}
};

class UnmatchedOp : public Error {
public:
  using Error::Error;
};

class UnknownFrequency : public Error {
public:
  using Error::Error;
};

class WaitTooShort : public Error {
public:
  using Error::Error;
};

class ValidationError : public Error {
public:
  using Error::Error;
};

/// Scenario syntax problem. The message carries `<file>:<line>: <field>: <what>`.
class ParseError : public Error {
public:
  ParseError(const std::string& what, int line, std::string field)
      : Error(what), line_(line), field_(std::move(field)) {}

  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

private:
  int line_;
  std::string field_;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace ftsim
