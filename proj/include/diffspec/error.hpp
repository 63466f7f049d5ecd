#pragma once

#include <stdexcept>
#include <string>

namespace diffspec {

enum class ErrorKind {
  InvalidInput,
  DegenerateData,
  NumericalFailure,
};

// Base of every error raised by the library. The CLI maps kind() onto exit
// codes: InvalidInput/DegenerateData -> 2, NumericalFailure -> 3.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(ErrorKind::InvalidInput, what) {}
};

class DegenerateData : public Error {
 public:
  explicit DegenerateData(const std::string& what) : Error(ErrorKind::DegenerateData, what) {}
};

class NumericalFailure : public Error {
 public:
  explicit NumericalFailure(const std::string& what) : Error(ErrorKind::NumericalFailure, what) {}
};

}  // namespace diffspec
