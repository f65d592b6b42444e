#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace usched {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class PreconditionViolated : public Error {
public:
  using Error::Error;
};

/// Input exceeds a configured size guard (job-set capacity, oracle limits,
/// table width). Callers treat this as "try another algorithm".
class InstanceTooLarge : public Error {
public:
  using Error::Error;
};

class CycleDetected : public Error {
public:
  CycleDetected(std::size_t job, const std::string &what)
      : Error(what), job_(job) {}

  /// A job lying on the detected cycle (0-based).
  std::size_t job() const noexcept { return job_; }

private:
  std::size_t job_;
};

class InfeasibleInput : public Error {
public:
  using Error::Error;
};

class NotConflictFree : public Error {
public:
  using Error::Error;
};

class MissingSubschedule : public Error {
public:
  using Error::Error;
};

class SourceOverflow : public Error {
public:
  using Error::Error;
};

class WitnessUnavailable : public Error {
public:
  using Error::Error;
};

class UniverseMismatch : public Error {
public:
  using Error::Error;
};

class NegativeLayer : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string &what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class BadParams : public Error {
public:
  using Error::Error;
};

} // namespace usched
