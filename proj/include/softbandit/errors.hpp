#pragma once

#include <stdexcept>
#include <string>

namespace softbandit {

// Invalid or unparseable experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data: profile files, score files, trajectories.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ServiceErrorKind { Connection, Timeout, MalformedResponse, Status };

const char* to_string(ServiceErrorKind kind);

// Failure talking to the external generation service.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(ServiceErrorKind kind, const std::string& what, int status = 0)
      : std::runtime_error(what), kind_(kind), status_(status) {}

  ServiceErrorKind kind() const noexcept { return kind_; }
  // HTTP status for ServiceErrorKind::Status, 0 otherwise.
  int status() const noexcept { return status_; }

 private:
  ServiceErrorKind kind_;
  int status_;
};

}  // namespace softbandit
