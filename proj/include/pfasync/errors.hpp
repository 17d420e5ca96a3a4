#pragma once

#include <stdexcept>
#include <string>

namespace pfasync {

/// Base of every domain error raised by the library. The CLI maps these to
/// exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input (letter index, state index, length).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Incompatible encoder options, e.g. binary optimisation on a non-binary PFA.
class OptionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// An operation's precondition does not hold for the given automaton.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Exponential search refused because the instance exceeds the configured cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A model returned by a solver does not satisfy the formula it was given.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

/// A model does not decode to a word (no letter, or several, at a position).
class ModelError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// External solver process failed or produced unreadable output.
class ProcessError : public Error {
 public:
  using Error::Error;
};

}  // namespace pfasync
