#pragma once

#include <stdexcept>
#include <string>

namespace glancing {

// Exit-code taxonomy shared with the command-line tool.
enum class ErrorKind { config = 2, domain = 3, precision = 4, internal = 5 };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }
  int exit_code() const { return static_cast<int>(kind_); }

private:
  ErrorKind kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string &w) : Error(ErrorKind::config, w) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string &w) : Error(ErrorKind::domain, w) {}
};
struct PrecisionError : Error {
  explicit PrecisionError(const std::string &w)
      : Error(ErrorKind::precision, w) {}
};
struct InternalError : Error {
  explicit InternalError(const std::string &w)
      : Error(ErrorKind::internal, w) {}
};

} // namespace glancing
