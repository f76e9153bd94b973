#pragma once

#include <stdexcept>
#include <string>

namespace wlsapprox {

/// Error categories. The CLI maps each category onto its exit code.
enum class ErrorKind {
  config,
  parameter,
  domain,
  sampling,
  acceptance_failure,
  truncation_exceeded,
  degenerate_node,
  contract_violation,
  invariant_violation,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what) : Error(ErrorKind::parameter, what) {}
};

/// A point lies outside the box domain of the basis family.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

class SamplingError : public Error {
 public:
  explicit SamplingError(const std::string& what) : Error(ErrorKind::sampling, what) {}
};

/// The resampling loop gave up; carries the deviation of the last rejected draw.
class AcceptanceFailure : public Error {
 public:
  AcceptanceFailure(const std::string& what, double last_deviation)
      : Error(ErrorKind::acceptance_failure, what), last_deviation_(last_deviation) {}

  double last_deviation() const noexcept { return last_deviation_; }

 private:
  double last_deviation_;
};

class TruncationExceeded : public Error {
 public:
  explicit TruncationExceeded(const std::string& what)
      : Error(ErrorKind::truncation_exceeded, what) {}
};

class DegenerateNode : public Error {
 public:
  explicit DegenerateNode(const std::string& what) : Error(ErrorKind::degenerate_node, what) {}
};

class ContractViolation : public Error {
 public:
  explicit ContractViolation(const std::string& what)
      : Error(ErrorKind::contract_violation, what) {}
};

class InvariantViolation : public Error {
 public:
  explicit InvariantViolation(const std::string& what)
      : Error(ErrorKind::invariant_violation, what) {}
};

}  // namespace wlsapprox
