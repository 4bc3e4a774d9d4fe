#pragma once

#include <stdexcept>
#include <string>

namespace enralg {

/// Failure category; the CLI maps these onto exit statuses.
enum class ErrorKind {
  Invalid,      ///< malformed or inconsistent input values
  Unsupported,  ///< operation not available for the instance or input size
  Parse,        ///< text/JSON syntax or schema errors
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(const std::string& what) {
  throw Error(ErrorKind::Invalid, what);
}

[[noreturn]] inline void unsupported(const std::string& what) {
  throw Error(ErrorKind::Unsupported, what);
}

[[noreturn]] inline void parse_failure(const std::string& what) {
  throw Error(ErrorKind::Parse, what);
}

}  // namespace enralg
