#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace advflow {

// Base for every error the library reports. `kind()` is the stable
// machine-readable tag the CLI prints in its error object.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("parse_error", "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct InvalidNetwork : Error {
  explicit InvalidNetwork(const std::string& what) : Error("invalid_network", what) {}
};

struct GuardExceeded : Error {
  explicit GuardExceeded(const std::string& what) : Error("guard_exceeded", what) {}
};

struct LpError : Error {
  explicit LpError(const std::string& what) : Error("lp_error", what) {}
};

struct FieldError : Error {
  explicit FieldError(const std::string& what) : Error("field_error", what) {}
};

struct SingularMatrix : Error {
  explicit SingularMatrix(const std::string& what) : Error("singular_matrix", what) {}
};

struct CodecError : Error {
  explicit CodecError(const std::string& what) : Error("codec_error", what) {}
};

struct PreconditionViolated : Error {
  explicit PreconditionViolated(const std::string& what) : Error("precondition_violated", what) {}
};

struct ScheduleError : Error {
  explicit ScheduleError(const std::string& what) : Error("schedule_error", what) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error("config_error", what) {}
};

// Raised when harness code asks a causal view for traffic it has not seen yet.
struct CausalityViolation : std::logic_error {
  explicit CausalityViolation(const std::string& what) : std::logic_error(what) {}
};

// Enumeration guards default to the given value unless ADVFLOW_GUARD is set.
std::size_t guard_limit(std::size_t fallback);

}  // namespace advflow
