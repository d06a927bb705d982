#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace agora {

struct Transcript;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed strategy text. `offset` is the byte offset of the first bad character.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& what);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

/// Strategy quadruple breaks one or more cross-dimension rules.
class ConstraintViolation : public Error {
 public:
  explicit ConstraintViolation(std::vector<std::string> rules);
  const std::vector<std::string>& rules() const noexcept { return rules_; }

 private:
  std::vector<std::string> rules_;
};

/// Task or transcript document violates its schema; `pointer` is a JSON pointer.
class SchemaError : public Error {
 public:
  SchemaError(std::string pointer, const std::string& what);
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

class ParamError : public Error {
 public:
  using Error::Error;
};

class DegenerateError : public Error {
 public:
  using Error::Error;
};

class MixedSchemeError : public Error {
 public:
  using Error::Error;
};

class NoPredictions : public Error {
 public:
  using Error::Error;
};

/// Failure during a discussion run. The engine attaches whatever transcript
/// had been recorded when the failure surfaced.
class RunError : public Error {
 public:
  using Error::Error;

  const Transcript* partial_transcript() const noexcept { return partial_.get(); }
  void attach_partial(const Transcript& transcript);

 private:
  std::shared_ptr<const Transcript> partial_;
};

class BackendError : public RunError {
 public:
  using RunError::RunError;
};

class ProtocolError : public RunError {
 public:
  using RunError::RunError;
};

}  // namespace agora
