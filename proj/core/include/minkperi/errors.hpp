#pragma once

#include <stdexcept>
#include <string>

namespace minkperi {

enum class ErrorKind {
  kInvalidArgument,
  kResourceLimit,
  kResolution,
  kDegenerate,
  kUnsupported,
  kParse,
  kInequalityViolation,
  kOptimizerFailure,
};

// Base for every error raised by the library. The kind is what callers
// switch on (the CLI maps it onto process exit codes).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorKind::kInvalidArgument, what) {}
};

class ResourceLimit : public Error {
 public:
  explicit ResourceLimit(const std::string& what)
      : Error(ErrorKind::kResourceLimit, what) {}
};

class ResolutionError : public Error {
 public:
  ResolutionError(const std::string& what, double max_spacing)
      : Error(ErrorKind::kResolution, what), max_spacing_(max_spacing) {}

  // Largest grid spacing h that would have been accepted.
  double max_spacing() const noexcept { return max_spacing_; }

 private:
  double max_spacing_;
};

class DegenerateInput : public Error {
 public:
  explicit DegenerateInput(const std::string& what)
      : Error(ErrorKind::kDegenerate, what) {}
};

class Unsupported : public Error {
 public:
  explicit Unsupported(const std::string& what)
      : Error(ErrorKind::kUnsupported, what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(ErrorKind::kParse, what) {}
};

class InequalityViolation : public Error {
 public:
  explicit InequalityViolation(const std::string& what)
      : Error(ErrorKind::kInequalityViolation, what) {}
};

class OptimizerFailure : public Error {
 public:
  explicit OptimizerFailure(const std::string& what)
      : Error(ErrorKind::kOptimizerFailure, what) {}
};

}  // namespace minkperi
