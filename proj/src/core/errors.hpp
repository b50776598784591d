#pragma once

#include <stdexcept>
#include <string>

namespace qed {

enum class ErrorCode {
  InvalidArgument = 1,
  PoleProximity = 2,
  QuadratureFailure = 3,
  ConstructionFailure = 4,
  Io = 5,
};

// Base of every error raised by the core. The C API maps the code onto its
// status enum and keeps the message for qed_last_error().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorCode::InvalidArgument, what) {}
};

// Evaluation requested within the pole guard of a singular point.
class PoleError : public Error {
 public:
  explicit PoleError(const std::string& what)
      : Error(ErrorCode::PoleProximity, what) {}
};

class QuadratureError : public Error {
 public:
  explicit QuadratureError(const std::string& what)
      : Error(ErrorCode::QuadratureFailure, what) {}
};

class ConstructionError : public Error {
 public:
  explicit ConstructionError(const std::string& what)
      : Error(ErrorCode::ConstructionFailure, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::Io, what) {}
};

}  // namespace qed
