#pragma once

#include <stdexcept>
#include <string>

namespace aif {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Array dimensions disagree with what an operation expects.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An observation, action, factor or modality index lies outside its range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Non-finite or otherwise unusable numbers reached a numerical routine.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Misuse of a stateful object (agent methods called out of order, missing priors).
class StateError : public Error {
 public:
  using Error::Error;
};

/// Model file does not follow the schema. `path()` names the offending field.
class ParseError : public Error {
 public:
  ParseError(std::string path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace aif
