#ifndef WAVE3D_ERRORS_HPP
#define WAVE3D_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wave3d {

// Base error carrying a stable machine-readable kind tag.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& msg)
      : std::runtime_error(msg), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

class ParameterError : public Error {
public:
  explicit ParameterError(const std::string& msg) : Error("parameter", msg) {}
};

class DomainError : public Error {
public:
  explicit DomainError(const std::string& msg) : Error("domain", msg) {}
};

class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& msg) : Error("validation", msg) {}
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& msg) : Error("config", msg) {}
};

class IndexError : public Error {
public:
  explicit IndexError(const std::string& msg) : Error("index", msg) {}
};

class InsufficientDataError : public Error {
public:
  explicit InsufficientDataError(const std::string& msg) : Error("insufficient_data", msg) {}
};

class DiagnosticError : public Error {
public:
  explicit DiagnosticError(const std::string& msg) : Error("diagnostic", msg) {}
};

class IoError : public Error {
public:
  explicit IoError(const std::string& msg) : Error("io", msg) {}
};

// Thrown when a field stops being finite; carries the offending step.
class NumericalBlowupError : public Error {
public:
  NumericalBlowupError(int step, const std::string& msg)
      : Error("numerical_blowup", msg), step_(step) {}
  int step() const noexcept { return step_; }

private:
  int step_;
};

}  // namespace wave3d

#endif
