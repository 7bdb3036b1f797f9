#pragma once

#include <stdexcept>
#include <string>

namespace mmwmac {

enum class ErrorCode {
  kDomain = 1,
  kNoInterferenceRange,
  kDegenerateDelay,
  kConfig,
  kNumerical,
  kIo,
};

// Base of every exception thrown by the library. The C API maps the code
// one-to-one onto mmw_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCode::kDomain, what) {}
};

// The link cannot reach the SINR threshold even without interference, so
// the interference range is undefined.
class NoInterferenceRange : public Error {
 public:
  explicit NoInterferenceRange(const std::string& what)
      : Error(ErrorCode::kNoInterferenceRange, what) {}
};

class DegenerateDelay : public Error {
 public:
  explicit DegenerateDelay(const std::string& what)
      : Error(ErrorCode::kDegenerateDelay, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCode::kConfig, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorCode::kNumerical, what) {}
};

}  // namespace mmwmac
